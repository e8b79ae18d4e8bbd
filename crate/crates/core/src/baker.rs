//! The lower-bound pipeline for linear forms
//! `Lambda = beta_0 + beta_1 phi_1(alpha) + ... + beta_m phi_m(alpha)`.
//!
//! Every bound is carried as an enclosure of its natural logarithm: for
//! realistic constants the bounds are far below anything a decimal rendering
//! could show, while their logarithms are modest numbers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::certificates::constants::{compute_constants, compute_d_constants, BoundConstants, ConstantsReport, DConstants};
use crate::efunction::{phi_enclosure, LambdaConfig};
use crate::error::{PadeError, Result};
use crate::kernel::elementary::{e_at, eps_bits, exp_at, ln_at, sqrt_point};
use crate::kernel::logexpr::{LogExpr, Status};
use crate::kernel::quadratic::{parse_quadratic_int, AlgebraicRatio, QuadraticInt};
use crate::kernel::rational::Rational;
use crate::kernel::RatInterval;

/// Working precision of the bound formulas, in bits.
pub const BOUND_BITS: u32 = 96;

/// Ladder of precisions tried before a comparison is reported undecided.
const REFINE_LADDER: [u32; 4] = [64, 128, 256, 512];

/// Relative width of the enclosure returned by [`solve_x2`], as a power of 2.
const X2_REL_BITS: u32 = 44;

/// Doubling of the bracket for `x_2` stops at `2^X2_MAX_EXPONENT`.
const X2_MAX_EXPONENT: u64 = 1 << 22;

/// Heights at most `e^e` are replaced by this value in empirical
/// comparisons, where the theorem's formula is undefined.
pub const CLAMPED_HEIGHT: i64 = 16;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn qu(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `beta_0 + sum_j beta_j phi_{lambda_j}(alpha)` with integral coefficients
/// in the field of `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    beta: Vec<QuadraticInt>,
    alpha: AlgebraicRatio,
}

impl LinearForm {
    pub fn new(beta: Vec<QuadraticInt>, alpha: AlgebraicRatio) -> Result<Self> {
        if beta.len() < 2 {
            return Err(PadeError::Arity {
                expected: 2,
                got: beta.len(),
            });
        }
        if let Some(b) = beta.iter().find(|b| b.d() != alpha.d()) {
            return Err(PadeError::FieldMismatch(b.d(), alpha.d()));
        }
        if beta.iter().all(QuadraticInt::is_zero) {
            return Err(PadeError::ZeroLinearForm);
        }
        Ok(Self { beta, alpha })
    }

    /// Comma-separated coefficients such as `-3,1` or `1+i,0,2`.
    pub fn parse(beta: &str, alpha: AlgebraicRatio) -> Result<Self> {
        let d = alpha.d();
        let coeffs = beta
            .split(',')
            .map(|t| parse_quadratic_int(t.trim(), d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, alpha)
    }

    pub fn m(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self) -> &[QuadraticInt] {
        &self.beta
    }

    pub fn alpha(&self) -> &AlgebraicRatio {
        &self.alpha
    }

    /// `h_j^2 = max(1, |beta_j|^2)` for `j = 1..=m`.
    pub fn h_squared(&self, j: usize) -> Rational {
        self.beta[j].abs_squared().max(Rational::one())
    }

    /// `H^2 = prod_{j >= 1} h_j^2`, exact.
    pub fn height_squared(&self) -> Rational {
        (1..=self.m()).map(|j| self.h_squared(j)).product()
    }

    /// `ln H`.
    pub fn ln_height(&self) -> LogExpr {
        LogExpr::ln_scaled(&self.height_squared(), &Rational::new(BigInt::one(), BigInt::from(2)))
    }

    /// `ln Hhat = m ln(2m) + ln H`.
    pub fn ln_height_hat(&self) -> LogExpr {
        let m = self.m();
        LogExpr::ln_scaled(&qu(2 * m), &qu(m)).plus(&self.ln_height())
    }

    fn check_config(&self, config: &LambdaConfig) -> Result<()> {
        if config.m() != self.m() {
            return Err(PadeError::Arity {
                expected: config.m() + 1,
                got: self.beta.len(),
            });
        }
        Ok(())
    }
}

/// `f(x) = x ln x - 2 e m (x + m)`, enclosed.
fn x2_equation(x: &Rational, e: &Rational, m: usize, prec: u32) -> RatInterval {
    let xi = RatInterval::point(x.clone());
    let ln = ln_at(&xi, prec).expect("x > 0");
    let rhs = q(2) * e * qu(m) * (x + qu(m));
    (&xi * &ln).add_rational(&-rhs)
}

fn x2_sign(x: &Rational, e: &Rational, m: usize) -> Option<Ordering> {
    [80, 160, 320].iter().find_map(|&p| {
        let f = x2_equation(x, e, m, p);
        if f.lo().is_positive() {
            Some(Ordering::Greater)
        } else if f.hi().is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    })
}

fn pow2(k: u64) -> Rational {
    Rational::from_integer(BigInt::one() << k as usize)
}

/// The unique root `x > 1` of `x ln x = 2 e m (x + m)` for a point `e > 0`.
/// The function is convex and negative at 1, so the root is also the
/// largest one.
fn largest_root(e: &Rational, m: usize) -> Result<RatInterval> {
    let above = |x: &Rational| x2_sign(x, e, m) == Some(Ordering::Greater);
    // exponential search on the exponent, then on the exponent's bits
    let mut k = 1u64;
    while !above(&pow2(k)) {
        k *= 2;
        if k > X2_MAX_EXPONENT {
            return Err(PadeError::NoBracket(format!("x ln x = 2*{e}*{m}*(x+{m}) beyond 2^{X2_MAX_EXPONENT}")));
        }
    }
    let (mut k_lo, mut k_hi) = (0u64, k);
    while k_hi - k_lo > 1 {
        let mid = (k_lo + k_hi) / 2;
        if above(&pow2(mid)) {
            k_hi = mid;
        } else {
            k_lo = mid;
        }
    }
    let (mut lo, mut hi) = (pow2(k_lo), pow2(k_hi));
    if k_lo == 0 {
        lo = Rational::one();
    }
    let target = Rational::new(BigInt::one(), BigInt::one() << X2_REL_BITS as usize);
    while &hi - &lo > &lo * &target {
        let mid = (&lo + &hi) / q(2);
        match x2_sign(&mid, e, m) {
            Some(Ordering::Greater) => hi = mid,
            Some(_) => lo = mid,
            // f(mid) is within rounding of zero: mid is as good as the root
            None => return Ok(RatInterval::new(lo, hi)),
        }
    }
    Ok(RatInterval::new(lo, hi))
}

/// `x_2 = max(1, x)` where `x` is the largest solution of
/// `x ln x = 2 e_1 m (x + m)`, enclosed for every `e_1` in the interval.
/// The root grows with `e_1`, so the endpoints bracket it.
pub fn solve_x2(e1: &RatInterval, m: usize) -> Result<RatInterval> {
    if !e1.lo().is_positive() {
        return Err(PadeError::Domain(format!("solve_x2 needs e1 > 0, got {e1}")));
    }
    if m == 0 {
        return Err(PadeError::Domain("solve_x2 needs m >= 1".into()));
    }
    let lo = largest_root(e1.lo(), m)?;
    let hi = if e1.is_point() { lo.clone() } else { largest_root(e1.hi(), m)? };
    Ok(RatInterval::new(
        lo.lo().clone().max(Rational::one()),
        hi.hi().clone().max(Rational::one()),
    ))
}

/// Three-way verdict of the admissibility condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Admissible {
    Yes,
    No,
    Undecided,
}

/// `2 ln Hhat >= max(2 ln N2, x2 ln x2, e^e)` with every side enclosed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub status: Admissible,
    pub two_ln_h_hat: RatInterval,
    pub two_ln_n2: RatInterval,
    pub x2_ln_x2: RatInterval,
    pub e_to_e: RatInterval,
}

/// Admissibility from raw logarithms, so that synthetic constants can be
/// fed in directly.
pub fn admissibility_from(ln_h_hat: &LogExpr, e1: &LogExpr, n2: &LogExpr, m: usize) -> Result<Admissibility> {
    let mut last = None;
    for bits in REFINE_LADDER {
        let lhs = ln_h_hat.enclose(bits).scale(&q(2));
        let n2_enc = n2.enclose(bits);
        if !n2_enc.lo().is_positive() {
            return Err(PadeError::Domain(format!("N2 must be positive, got {n2_enc}")));
        }
        let two_ln_n2 = ln_at(&n2_enc, bits)?.scale(&q(2));
        let x2 = solve_x2(&e1.enclose(bits), m)?;
        let x2_ln_x2 = &x2 * &ln_at(&x2, bits)?;
        let e_to_e = exp_at(&e_at(bits + 8), bits);
        let rhs = two_ln_n2.max(&x2_ln_x2).max(&e_to_e);
        let status = if lhs.lo() >= rhs.hi() {
            Admissible::Yes
        } else if lhs.hi() < rhs.lo() {
            Admissible::No
        } else {
            Admissible::Undecided
        };
        let report = Admissibility {
            status,
            two_ln_h_hat: lhs,
            two_ln_n2,
            x2_ln_x2,
            e_to_e,
        };
        if status != Admissible::Undecided {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("ladder is non-empty"))
}

pub fn admissibility(form: &LinearForm, constants: &BoundConstants) -> Result<Admissibility> {
    admissibility_from(&form.ln_height_hat(), &constants.e1, &constants.n2, form.m())
}

/// `ln t > e`, i.e. `t > e^e`, decided on enclosures; `None` if the
/// enclosures still touch at the last rung.
fn exceeds_e_to_e(ln_t: &LogExpr) -> Option<bool> {
    REFINE_LADDER.iter().find_map(|&bits| {
        let x = ln_t.enclose(bits);
        let e = e_at(bits);
        if x.lo() > e.hi() {
            Some(true)
        } else if x.hi() <= e.lo() {
            Some(false)
        } else {
            None
        }
    })
}

fn require_above_e_to_e(ln_t: &LogExpr, what: &str) -> Result<()> {
    match exceeds_e_to_e(ln_t) {
        Some(true) => Ok(()),
        _ => Err(PadeError::Domain(format!("{what} must exceed e^e"))),
    }
}

/// Logarithm of
/// `2^{-(m+1)} e^{-mK} (lnln Hhat / ln Hhat)^m Hhat^{-1 - 4K / lnln Hhat}`
/// with `K = 1 + b1 + e1 m`.
pub fn corollary_bound_from(ln_h_hat: &LogExpr, k: &LogExpr, m: usize, bits: u32) -> Result<RatInterval> {
    require_above_e_to_e(ln_h_hat, "Hhat")?;
    let l = ln_h_hat.enclose(bits);
    let ll = ln_at(&l, bits)?;
    let kk = k.enclose(bits);
    let mm = qu(m);
    let ln2 = ln_at(&RatInterval::point(q(2)), bits)?;
    let ratio = kk.scale(&q(4)).div(&ll).expect("lnln Hhat > 1");
    let power = &ratio.add_rational(&Rational::one()) * &l;
    let log_ratio = &ll - &l;
    let total = &(&ln2.scale(&-(&mm + Rational::one())) - &kk.scale(&mm)) + &log_ratio.scale(&mm);
    Ok((&total - &power).round_out(bits))
}

pub fn corollary_bound(form: &LinearForm, constants: &BoundConstants) -> Result<RatInterval> {
    corollary_bound_from(&form.ln_height_hat(), &constants.exponent_sum(), form.m(), BOUND_BITS)
}

/// Logarithm of `H^{-1 - 6 D / lnln H}` with `D = d0 + d1 m + d2 m^2`.
pub fn theorem_bound_from(ln_h: &LogExpr, d_sum: &LogExpr, bits: u32) -> Result<RatInterval> {
    require_above_e_to_e(ln_h, "H")?;
    let l = ln_h.enclose(bits);
    let ll = ln_at(&l, bits)?;
    let exponent = d_sum
        .enclose(bits)
        .scale(&q(6))
        .div(&ll)
        .expect("lnln H > 1")
        .add_rational(&Rational::one());
    Ok((-(&exponent * &l)).round_out(bits))
}

pub fn theorem_bound(form: &LinearForm, d: &DConstants) -> Result<RatInterval> {
    theorem_bound_from(&form.ln_height(), &d.combined(form.m()), BOUND_BITS)
}

/// Complex interval product.
fn cmul(a: &(RatInterval, RatInterval), b: &(RatInterval, RatInterval)) -> (RatInterval, RatInterval) {
    (
        &(&a.0 * &b.0) - &(&a.1 * &b.1),
        &(&a.0 * &b.1) + &(&a.1 * &b.0),
    )
}

/// Enclosures of the real and imaginary parts of `Lambda`, each of width at
/// most about `eps`: term `j` gets `phi_j` to within
/// `eps / (2 (m+1) (1 + |beta_j|))`.
pub fn evaluate_linear_form(
    form: &LinearForm,
    config: &LambdaConfig,
    eps: &Rational,
) -> Result<(RatInterval, RatInterval)> {
    form.check_config(config)?;
    if !eps.is_positive() {
        return Err(PadeError::Domain("eps must be positive".into()));
    }
    let m = form.m();
    let bits = eps_bits(eps) + 16;
    let mut acc = form.beta[0].to_elem().parts_at(bits);
    for j in 1..=m {
        let beta = &form.beta[j];
        if beta.is_zero() {
            continue;
        }
        let beta_abs = sqrt_point(&beta.abs_squared(), 8).hi().clone();
        let budget = eps / (qu(2 * (m + 1)) * (Rational::one() + &beta_abs));
        let phi = phi_enclosure(config.lambda(j), form.alpha(), &budget)?;
        let extra = (beta_abs.to_integer().bits() + 4) as u32;
        let b = beta.to_elem().parts_at(bits + extra);
        let term = cmul(&b, &phi);
        acc = (&acc.0 + &term.0, &acc.1 + &term.1);
    }
    Ok(acc)
}

/// Enclosure of `ln |Lambda|` from enclosures of its parts; `None` when
/// they do not exclude zero.
pub fn ln_abs_enclosure(re: &RatInterval, im: &RatInterval, bits: u32) -> Option<RatInterval> {
    let lo = &(re.mig() * re.mig()) + &(im.mig() * im.mig());
    if lo.is_zero() {
        return None;
    }
    let hi = &(re.mag() * re.mag()) + &(im.mag() * im.mag());
    let sq = RatInterval::new(lo, hi).round_out(bits + 8);
    Some(ln_at(&sq, bits).ok()?.scale(&Rational::new(BigInt::one(), BigInt::from(2))))
}

/// `|Lambda|` against a bound given by its logarithm, refining `Lambda`
/// until the comparison is certain or the width drops below `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub lambda_re: RatInterval,
    pub lambda_im: RatInterval,
    pub ln_abs_lambda: Option<RatInterval>,
    pub ln_bound: RatInterval,
    /// `pass` when `|Lambda|` exceeds the bound.
    pub verdict: Status,
}

pub fn compare_with_bound(
    form: &LinearForm,
    config: &LambdaConfig,
    ln_bound: &RatInterval,
    cap: &Rational,
) -> Result<Comparison> {
    let mut eps = Rational::new(BigInt::one(), BigInt::one() << 40usize);
    loop {
        let (re, im) = evaluate_linear_form(form, config, &eps)?;
        let bits = eps_bits(&eps).max(64);
        let ln_abs = ln_abs_enclosure(&re, &im, bits);
        let verdict = match &ln_abs {
            Some(l) if l.lo() > ln_bound.hi() => Some(Status::Pass),
            Some(l) if l.hi() < ln_bound.lo() => Some(Status::Fail),
            _ if &eps < cap => Some(Status::Undecided),
            _ => None,
        };
        if let Some(verdict) = verdict {
            return Ok(Comparison {
                lambda_re: re.round_out(bits),
                lambda_im: im.round_out(bits),
                ln_abs_lambda: ln_abs,
                ln_bound: ln_bound.clone(),
                verdict,
            });
        }
        eps /= Rational::from_integer(BigInt::one() << 64usize);
    }
}

/// Constants of the pipeline that depend only on the parameters and `alpha`.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub constants: BoundConstants,
    pub d: DConstants,
    pub x2: RatInterval,
}

impl Pipeline {
    pub fn new(config: &LambdaConfig, alpha: &AlgebraicRatio) -> Result<Self> {
        let m = config.m();
        let constants = compute_constants(config, alpha, m);
        let d = compute_d_constants(config, alpha);
        let x2 = solve_x2(&constants.e1.enclose(BOUND_BITS), m)?;
        Ok(Self { constants, d, x2 })
    }

    /// Enclosures of `1 + b1 + e1 m` and `d0 + d1 m + d2 m^2`, each of width
    /// at most `eps`.
    pub fn identity(&self, eps: &Rational) -> IdentityReport {
        let m = self.constants.inputs.m;
        let lhs = self.constants.exponent_sum().enclose_within(eps);
        let rhs = self.d.combined(m).enclose_within(eps);
        let printed = self
            .d
            .d0
            .plus(&self.d.d1_printed.scale(&qu(m)))
            .plus(&self.d.d2.scale(&(qu(m) * qu(m))))
            .enclose_within(eps);
        IdentityReport {
            overlap: lhs.overlaps(&rhs),
            symbolic: self.constants.exponent_sum().minus(&self.d.combined(m)).is_zero(),
            lhs,
            rhs,
            rhs_with_printed_d1: printed,
        }
    }

    pub fn report(&self, eps: &Rational) -> PipelineReport {
        let e = |x: &LogExpr| x.enclose_within(eps);
        PipelineReport {
            constants: self.constants.report(eps),
            d0: e(&self.d.d0),
            d1: e(&self.d.d1),
            d2: e(&self.d.d2),
            d1_printed: e(&self.d.d1_printed),
            x2: self.x2.round_out(BOUND_BITS),
            identity: self.identity(eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// `1 + b1 + e1 m`.
    pub lhs: RatInterval,
    /// `d0 + d1 m + d2 m^2`.
    pub rhs: RatInterval,
    pub rhs_with_printed_d1: RatInterval,
    pub overlap: bool,
    /// The difference cancels term by term.
    pub symbolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub constants: ConstantsReport,
    pub d0: RatInterval,
    pub d1: RatInterval,
    pub d2: RatInterval,
    pub d1_printed: RatInterval,
    pub x2: RatInterval,
    pub identity: IdentityReport,
}

/// Whether the comparison is backed by the theorem or only observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rigorous,
    Empirical,
}

/// Everything known about one linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub lambdas: Vec<Rational>,
    pub alpha: AlgebraicRatio,
    pub beta: Vec<QuadraticInt>,
    pub height_squared: Rational,
    pub ln_height: RatInterval,
    pub ln_height_hat: RatInterval,
    pub pipeline: PipelineReport,
    pub admissibility: Admissibility,
    pub ln_corollary_bound: Option<RatInterval>,
    pub ln_theorem_bound: Option<RatInterval>,
    /// `H^2` for the height used in the comparison.
    pub comparison_height_squared: Rational,
    /// True when `H <= e^e` was replaced by [`CLAMPED_HEIGHT`].
    pub clamped: bool,
    pub comparison: Comparison,
    pub mode: Mode,
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("schema", &1)?;
        map.serialize_entry("lambdas", &self.lambdas.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        map.serialize_entry("alpha", &self.alpha.to_string())?;
        map.serialize_entry("field", &self.alpha.d())?;
        map.serialize_entry("beta", &self.beta.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        map.serialize_entry("H_squared", &self.height_squared.to_string())?;
        map.serialize_entry("ln_H", &self.ln_height)?;
        map.serialize_entry("ln_Hhat", &self.ln_height_hat)?;
        map.serialize_entry("constants", &self.pipeline.constants)?;
        map.serialize_entry("d0", &self.pipeline.d0)?;
        map.serialize_entry("d1", &self.pipeline.d1)?;
        map.serialize_entry("d2", &self.pipeline.d2)?;
        map.serialize_entry("d1_printed", &self.pipeline.d1_printed)?;
        map.serialize_entry("x2", &self.pipeline.x2)?;
        map.serialize_entry("identity", &self.pipeline.identity)?;
        map.serialize_entry("admissibility", &self.admissibility)?;
        map.serialize_entry("ln_corollary_bound", &self.ln_corollary_bound)?;
        map.serialize_entry("ln_theorem_bound", &self.ln_theorem_bound)?;
        map.serialize_entry("comparison_H_squared", &self.comparison_height_squared.to_string())?;
        map.serialize_entry("clamped", &self.clamped)?;
        map.serialize_entry("comparison", &self.comparison)?;
        map.serialize_entry("mode", &self.mode)?;
        map.end()
    }
}

/// Height used in comparisons, as `(H^2, ln H, clamped)`: `H` itself when
/// `H > e^e`, else [`CLAMPED_HEIGHT`].
pub fn comparison_height(form: &LinearForm) -> (Rational, LogExpr, bool) {
    match exceeds_e_to_e(&form.ln_height()) {
        Some(true) => (form.height_squared(), form.ln_height(), false),
        _ => (q(CLAMPED_HEIGHT * CLAMPED_HEIGHT), LogExpr::ln(&q(CLAMPED_HEIGHT)), true),
    }
}

/// Runs the whole pipeline for one form. The comparison is `rigorous` only
/// when admissibility is established; otherwise it is an observation at a
/// height far below the theorem's range.
pub fn certify(form: &LinearForm, config: &LambdaConfig, pipeline: &Pipeline, cap: &Rational) -> Result<BoundReport> {
    form.check_config(config)?;
    let eps = Rational::new(BigInt::one(), BigInt::one() << 64usize);
    let admissibility = admissibility(form, &pipeline.constants)?;
    let ln_corollary_bound = corollary_bound(form, &pipeline.constants).ok();
    let ln_theorem_bound = theorem_bound(form, &pipeline.d).ok();
    let (h2, ln_h_used, clamped) = comparison_height(form);
    let bound = theorem_bound_from(&ln_h_used, &pipeline.d.combined(form.m()), BOUND_BITS)?;
    let comparison = compare_with_bound(form, config, &bound, cap)?;
    let mode = if admissibility.status == Admissible::Yes {
        Mode::Rigorous
    } else {
        Mode::Empirical
    };
    Ok(BoundReport {
        lambdas: config.lambdas().to_vec(),
        alpha: form.alpha.clone(),
        beta: form.beta.clone(),
        height_squared: form.height_squared(),
        ln_height: form.ln_height().enclose_within(&eps),
        ln_height_hat: form.ln_height_hat().enclose_within(&eps),
        pipeline: pipeline.report(&eps),
        admissibility,
        ln_corollary_bound,
        ln_theorem_bound,
        comparison_height_squared: h2,
        clamped,
        comparison,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efunction::validate_config;
    use crate::kernel::rational::{int, rat};

    fn form(beta: &str, alpha: &str, d: u64) -> LinearForm {
        LinearForm::parse(beta, AlgebraicRatio::parse(alpha, d).unwrap()).unwrap()
    }

    /// Plain bisection in f64, far from any rounding trouble.
    fn float_root(e: f64, m: f64) -> f64 {
        let f = |x: f64| x * x.ln() - 2.0 * e * m * (x + m);
        let (mut lo, mut hi) = (1.0, 2.0);
        while f(hi) <= 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    fn to_f64(x: &Rational) -> f64 {
        num_traits::ToPrimitive::to_f64(x).unwrap()
    }

    #[test]
    fn x2_small_cases_match_float_bisection() {
        for (e, m) in [(1, 1), (1, 2), (3, 1), (2, 3)] {
            let x = solve_x2(&RatInterval::point(int(e)), m).unwrap();
            let expected = float_root(e as f64, m as f64);
            assert!((to_f64(&x.midpoint()) - expected).abs() < 1e-6 * expected, "{e} {m}");
        }
        let x = solve_x2(&RatInterval::point(int(1)), 1).unwrap();
        assert!((to_f64(&x.midpoint()) - 9.18).abs() < 0.01);
    }

    #[test]
    fn x2_grows_with_e1() {
        let a = solve_x2(&RatInterval::point(int(1)), 1).unwrap();
        let b = solve_x2(&RatInterval::point(int(2)), 1).unwrap();
        assert!(a.hi() < b.lo());
        let both = solve_x2(&RatInterval::new(int(1), int(2)), 1).unwrap();
        assert!(both.contains_interval(&RatInterval::new(a.hi().clone(), b.lo().clone())));
    }

    #[test]
    fn x2_rejects_nonpositive_e1() {
        assert!(solve_x2(&RatInterval::point(int(0)), 1).is_err());
        assert!(solve_x2(&RatInterval::point(int(1)), 0).is_err());
    }

    #[test]
    fn forms_are_validated() {
        let a = AlgebraicRatio::parse("1", 0).unwrap();
        assert!(matches!(LinearForm::parse("0,0", a.clone()), Err(PadeError::ZeroLinearForm)));
        assert!(matches!(LinearForm::parse("1", a.clone()), Err(PadeError::Arity { .. })));
        let f = LinearForm::parse("5,-3,0", a).unwrap();
        assert_eq!(f.height_squared(), int(9));
        assert_eq!(f.h_squared(2), int(1));
        let g = form("1,1+i", "i", 1);
        assert_eq!(g.height_squared(), int(2));
    }

    #[test]
    fn lambda_at_one_is_e_minus_three() {
        let cfg = validate_config(&[int(0)]).unwrap();
        let f = form("-3,1", "1", 0);
        let eps = rat(1, 1_000_000_000);
        let (re, im) = evaluate_linear_form(&f, &cfg, &eps).unwrap();
        let e = e_at(64).add_rational(&int(-3));
        assert!(re.overlaps(&e));
        assert!(re.width() <= eps);
        assert!(im.contains(&int(0)));
        let unit = form("1,0", "1", 0);
        let (re, _) = evaluate_linear_form(&unit, &cfg, &eps).unwrap();
        assert_eq!(re, RatInterval::point(int(1)));
    }

    #[test]
    fn tiny_form_is_not_admissible() {
        let cfg = validate_config(&[int(0)]).unwrap();
        let f = form("-1000,1000", "1", 0);
        let constants = compute_constants(&cfg, f.alpha(), 1);
        assert_eq!(admissibility(&f, &constants).unwrap().status, Admissible::No);
    }

    #[test]
    fn synthetic_huge_height_is_admissible() {
        let ln_h_hat = LogExpr::constant(int(1_000_000));
        let a = admissibility_from(&ln_h_hat, &LogExpr::constant(int(1)), &LogExpr::constant(int(5)), 1).unwrap();
        assert_eq!(a.status, Admissible::Yes);
        let small = admissibility_from(&LogExpr::constant(int(5)), &LogExpr::constant(int(1)), &LogExpr::constant(int(5)), 1).unwrap();
        assert_eq!(small.status, Admissible::No);
    }

    #[test]
    fn theorem_bound_at_e_squared() {
        // H = e^{e^2}: ln H = e^2, lnln H = 2, so ln bound = -(1 + 3 D) e^2
        let e = e_at(80);
        let e2 = (&e * &e).round_out(80);
        let ln_h = LogExpr::constant(e2.hi().clone());
        let d = LogExpr::constant(int(10));
        let b = theorem_bound_from(&ln_h, &d, 96).unwrap();
        let expected = -31.0 * 2f64.exp();
        assert!((to_f64(&b.midpoint()) - expected).abs() < 1e-6);
        assert!(theorem_bound_from(&LogExpr::constant(int(2)), &d, 96).is_err());
    }

    #[test]
    fn corollary_bound_closed_form() {
        // m = 1, b1 = e1 = 1 so K = 3; ln Hhat = e^2
        let e = e_at(80);
        let ln_h_hat = LogExpr::constant((&e * &e).round_out(80).hi().clone());
        let b = corollary_bound_from(&ln_h_hat, &LogExpr::constant(int(3)), 1, 96).unwrap();
        let l = 2f64.exp();
        let expected = -2.0 * 2f64.ln() - 3.0 + (2.0 - l) - (1.0 + 6.0) * l;
        assert!((to_f64(&b.midpoint()) - expected).abs() < 1e-6);
    }

    #[test]
    fn bounds_decrease_with_height() {
        let d = LogExpr::constant(int(100));
        let mut last = None;
        for k in [20, 40, 80, 160] {
            let b = theorem_bound_from(&LogExpr::constant(int(k)), &d, 96).unwrap();
            if let Some(prev) = last {
                assert!(b.hi() < &prev);
            }
            last = Some(b.lo().clone());
        }
    }

    #[test]
    fn certify_small_form_is_empirical_pass() {
        let cfg = validate_config(&[int(0)]).unwrap();
        let f = form("-3,1", "1", 0);
        let p = Pipeline::new(&cfg, f.alpha()).unwrap();
        let r = certify(&f, &cfg, &p, &rat(1, 1_000_000)).unwrap();
        assert_eq!(r.mode, Mode::Empirical);
        assert_eq!(r.comparison.verdict, Status::Pass);
        assert!(r.clamped);
        assert_eq!(r.comparison_height_squared, int(CLAMPED_HEIGHT * CLAMPED_HEIGHT));
        assert!(r.ln_theorem_bound.is_none());
        assert!(r.pipeline.identity.overlap && r.pipeline.identity.symbolic);
        assert!(!r.pipeline.identity.rhs_with_printed_d1.overlaps(&r.pipeline.identity.lhs));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["mode"], "empirical");
    }
}
