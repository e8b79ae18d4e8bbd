//! The constants of the size and remainder estimates, kept as exact
//! [`LogExpr`] values and enclosed only when reported or compared.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::efunction::LambdaConfig;
use crate::kernel::logexpr::{decide_nonneg, LogExpr, Status};
use crate::kernel::quadratic::AlgebraicRatio;
use crate::kernel::rational::Rational;
use crate::kernel::RatInterval;

fn q(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn qu(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn ln2(coeff: Rational) -> LogExpr {
    LogExpr::ln_scaled(&qi(2), &coeff)
}

fn ln_s(config: &LambdaConfig, coeff: Rational) -> LogExpr {
    LogExpr::ln_scaled(&q(config.s()), &coeff)
}

fn c(x: Rational) -> LogExpr {
    LogExpr::constant(x)
}

/// Inputs shared by every constant: the sizes of the parameters and of
/// `alpha = a/b`, with `|alpha|` and `|b|` carried through their squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantInputs {
    pub r: Rational,
    pub s: Rational,
    pub r_hat: Rational,
    pub s_hat: Rational,
    pub alpha_abs_sq: Rational,
    pub b_abs_sq: Rational,
    pub m: usize,
}

impl ConstantInputs {
    fn abs_alpha(&self, coeff: Rational) -> LogExpr {
        LogExpr::sqrt_scaled(&self.alpha_abs_sq, &coeff)
    }

    fn ln_b(&self) -> LogExpr {
        LogExpr::ln_scaled(&self.b_abs_sq, &Rational::new(BigInt::one(), BigInt::from(2)))
    }

    fn ln_s(&self, coeff: Rational) -> LogExpr {
        LogExpr::ln_scaled(&self.s, &coeff)
    }

    /// `2 ln max{1, |alpha|} = ln max{1, |alpha|^2}`.
    fn two_ln_max_alpha(&self) -> LogExpr {
        LogExpr::ln(&self.alpha_abs_sq.clone().max(Rational::one()))
    }
}

/// `c1, ..., c6` and the derived exponents of the final estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConstants {
    pub inputs: ConstantInputs,
    pub c1: LogExpr,
    pub c2: LogExpr,
    pub c3: LogExpr,
    pub c4: LogExpr,
    pub c5: LogExpr,
    pub c6: LogExpr,
    pub b1_hat: LogExpr,
    pub b1: LogExpr,
    pub b3: LogExpr,
    pub e1_hat: LogExpr,
    pub e1: LogExpr,
    pub e3: LogExpr,
    /// `max{b3, e3}`.
    pub n2: LogExpr,
}

/// Builds the constants for `m` parameters; `m` is usually `config.m()` but
/// is kept separate so the identity with the `d` constants can be probed for
/// other values.
pub fn compute_constants(config: &LambdaConfig, alpha: &AlgebraicRatio, m: usize) -> BoundConstants {
    let inputs = ConstantInputs {
        r: q(config.r()),
        s: q(config.s()),
        r_hat: q(config.r_hat()),
        s_hat: q(config.s_hat()),
        alpha_abs_sq: alpha.abs_squared(),
        b_abs_sq: alpha.den_abs_squared(),
        m,
    };
    constants_from_inputs(inputs)
}

pub fn constants_from_inputs(inputs: ConstantInputs) -> BoundConstants {
    let (r, s) = (&inputs.r, &inputs.s);
    let mm = qu(inputs.m);
    let one = Rational::one();
    let c1 = c(qi(6) * r * (&mm + &one)).plus(&inputs.abs_alpha(qi(2)));
    let c2 = ln2(qi(3))
        .plus(&inputs.ln_s(qi(3)))
        .plus(&c(qi(6) * s * (&mm + qi(3))));
    let c3 = inputs.ln_b().plus(&c(qi(12) * r * (&one + s * &mm)));
    let c4 = inputs
        .ln_b()
        .plus(&inputs.ln_s(qi(2) * (&mm + &one)))
        .plus(&c(qi(6) * s * (qi(3) + s * &mm)));
    let c5 = c1
        .plus(&c3)
        .plus(&ln2(one.clone()))
        .plus(&inputs.abs_alpha(qi(2) * (s * s - &one)));
    let c6 = c2
        .plus(&c4)
        .plus(&ln2(qi(3)))
        .plus(&inputs.ln_s(qi(4)))
        .plus(&inputs.two_ln_max_alpha());
    let b1_hat = c2.plus(&c4).plus(&c(one.clone()));
    let b3 = c1.plus(&c3);
    let e1_hat = c6.clone();
    let e3 = c5.clone();
    let b1 = b1_hat.plus(&c(one.clone()));
    let e1 = e1_hat.plus(&c(one));
    let n2 = larger(&b3, &e3);
    BoundConstants {
        inputs,
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        b1_hat,
        b1,
        b3,
        e1_hat,
        e1,
        e3,
        n2,
    }
}

/// The larger of two reals. `e3 - b3 = ln 2 + 2(S^2-1)|alpha|` is positive,
/// so in practice this is settled exactly.
fn larger(a: &LogExpr, b: &LogExpr) -> LogExpr {
    let cap = Rational::new(BigInt::one(), BigInt::from(1u64 << 60));
    match decide_nonneg(&a.minus(b), &cap).status {
        Status::Pass => a.clone(),
        _ => b.clone(),
    }
}

/// `d0`, `d1`, `d2` with `1 + b1 + e1 m = d0 + d1 m + d2 m^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DConstants {
    pub d0: LogExpr,
    pub d1: LogExpr,
    pub d2: LogExpr,
    /// `1 + 6 ln 2 + 9 ln S + 36 S + ln|b| + 2 ln max{1,|alpha|}`, the form
    /// that omits the `m`-linear part of `b1`; kept for comparison.
    pub d1_printed: LogExpr,
}

pub fn compute_d_constants(config: &LambdaConfig, alpha: &AlgebraicRatio) -> DConstants {
    d_from_inputs(&compute_constants(config, alpha, config.m()).inputs)
}

pub fn d_from_inputs(inputs: &ConstantInputs) -> DConstants {
    let s = &inputs.s;
    let d0 = c(qi(3) + qi(36) * s)
        .plus(&ln2(qi(3)))
        .plus(&inputs.ln_s(qi(5)))
        .plus(&inputs.ln_b());
    let common = c(Rational::one())
        .plus(&ln2(qi(6)))
        .plus(&inputs.ln_b())
        .plus(&inputs.two_ln_max_alpha());
    let d1_printed = common.plus(&inputs.ln_s(qi(9))).plus(&c(qi(36) * s));
    let d1 = common
        .plus(&inputs.ln_s(qi(11)))
        .plus(&c(qi(42) * s + qi(6) * s * s));
    let d2 = inputs.ln_s(qi(2)).plus(&c(qi(6) * s + qi(6) * s * s));
    DConstants {
        d0,
        d1,
        d2,
        d1_printed,
    }
}

impl DConstants {
    /// `d0 + d1 m + d2 m^2`.
    pub fn combined(&self, m: usize) -> LogExpr {
        let mm = qu(m);
        self.d0
            .plus(&self.d1.scale(&mm))
            .plus(&self.d2.scale(&(&mm * &mm)))
    }
}

impl BoundConstants {
    /// `1 + b1 + e1 m`.
    pub fn exponent_sum(&self) -> LogExpr {
        c(Rational::one())
            .plus(&self.b1)
            .plus(&self.e1.scale(&qu(self.inputs.m)))
    }

    pub fn report(&self, eps: &Rational) -> ConstantsReport {
        let e = |x: &LogExpr| x.enclose_within(eps);
        ConstantsReport {
            r: self.inputs.r.to_string(),
            s: self.inputs.s.to_string(),
            r_hat: self.inputs.r_hat.to_string(),
            s_hat: self.inputs.s_hat.to_string(),
            alpha_abs_squared: self.inputs.alpha_abs_sq.to_string(),
            b_abs_squared: self.inputs.b_abs_sq.to_string(),
            m: self.inputs.m,
            c1: e(&self.c1),
            c2: e(&self.c2),
            c3: e(&self.c3),
            c4: e(&self.c4),
            c5: e(&self.c5),
            c6: e(&self.c6),
            b1_hat: e(&self.b1_hat),
            b1: e(&self.b1),
            b3: e(&self.b3),
            e1_hat: e(&self.e1_hat),
            e1: e(&self.e1),
            e3: e(&self.e3),
            n2: e(&self.n2),
        }
    }
}

/// Enclosures of every constant plus the recorded inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "S")]
    pub s: String,
    #[serde(rename = "Rhat")]
    pub r_hat: String,
    #[serde(rename = "Shat")]
    pub s_hat: String,
    pub alpha_abs_squared: String,
    pub b_abs_squared: String,
    pub m: usize,
    pub c1: RatInterval,
    pub c2: RatInterval,
    pub c3: RatInterval,
    pub c4: RatInterval,
    pub c5: RatInterval,
    pub c6: RatInterval,
    pub b1_hat: RatInterval,
    pub b1: RatInterval,
    pub b3: RatInterval,
    pub e1_hat: RatInterval,
    pub e1: RatInterval,
    pub e3: RatInterval,
    #[serde(rename = "N2")]
    pub n2: RatInterval,
}

/// Logarithms of the size bounds that depend on `N`, for a configuration
/// with `m = config.m()`.
pub struct SizeForms;

impl SizeForms {
    fn parts(config: &LambdaConfig, n: usize) -> (Rational, Rational, Rational, Rational, Rational, Rational) {
        (
            q(config.r()),
            q(config.s()),
            q(config.r_hat()),
            q(config.s_hat()),
            qu(config.m()),
            qu(n),
        )
    }

    /// `ln E1 = 2(N+m) ln S + 6(Rhat m + Shat N)`.
    pub fn ln_e1(config: &LambdaConfig, n: usize) -> LogExpr {
        let (_, _, rh, sh, m, nn) = Self::parts(config, n);
        ln_s(config, qi(2) * (&nn + &m)).plus(&c(qi(6) * (rh * &m + sh * &nn)))
    }

    /// `ln E2 = 2(N+m) ln S + 6(R + S + Rhat m + (Shat+S) N)`.
    pub fn ln_e2(config: &LambdaConfig, n: usize) -> LogExpr {
        let (r, s, rh, sh, m, nn) = Self::parts(config, n);
        ln_s(config, qi(2) * (&nn + &m))
            .plus(&c(qi(6) * (&r + &s + rh * &m + (sh + &s) * &nn)))
    }

    /// `ln E1* = 2(m+1)N ln S + 6(m(Rhat + Shat N) + R + 2SN)`.
    pub fn ln_e1_star(config: &LambdaConfig, n: usize) -> LogExpr {
        let (r, s, rh, sh, m, nn) = Self::parts(config, n);
        ln_s(config, qi(2) * (&m + qi(1)) * &nn)
            .plus(&c(qi(6) * (&m * (rh + sh * &nn) + r + qi(2) * s * &nn)))
    }

    /// `ln E2* = 2(m+1)N ln S + 6(m(Rhat + Shat N) + 2R + 3SN)`.
    pub fn ln_e2_star(config: &LambdaConfig, n: usize) -> LogExpr {
        let (r, s, rh, sh, m, nn) = Self::parts(config, n);
        ln_s(config, qi(2) * (&m + qi(1)) * &nn)
            .plus(&c(qi(6) * (&m * (rh + sh * &nn) + qi(2) * r + qi(3) * s * &nn)))
    }

    /// `ln F1 = 3N ln S + 6(Rm + S + S(m+1)N)`.
    pub fn ln_f1(config: &LambdaConfig, n: usize) -> LogExpr {
        let (r, s, _, _, m, nn) = Self::parts(config, n);
        ln_s(config, qi(3) * &nn).plus(&c(qi(6) * (r * &m + &s + &s * (&m + qi(1)) * &nn)))
    }

    /// `ln F1* = N ln 8 + 3N ln S + 6(R(m+1) + S(m+3)N)`.
    pub fn ln_f1_star(config: &LambdaConfig, n: usize) -> LogExpr {
        let (r, s, _, _, m, nn) = Self::parts(config, n);
        ln2(qi(3) * &nn)
            .plus(&ln_s(config, qi(3) * &nn))
            .plus(&c(qi(6) * (r * (&m + qi(1)) + s * (&m + qi(3)) * &nn)))
    }
}

/// `true` when the enclosures of `1 + b1 + e1 m` and `d0 + d1 m + d2 m^2`
/// at width `eps` overlap.
pub fn identity_overlaps(constants: &BoundConstants, d: &DConstants, eps: &Rational) -> bool {
    let left = constants.exponent_sum().enclose_within(eps);
    let right = d.combined(constants.inputs.m).enclose_within(eps);
    left.overlaps(&right)
}
