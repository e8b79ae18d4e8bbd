//! Exact symbolic real numbers of the form
//! `sum q_i ln(a_i) + sum p_j sqrt(b_j) + c` with rational `q, a, p, b, c`,
//! and the refinement driver that decides their sign.
//!
//! Every bound in the certificate layer is the logarithm of a product of
//! rational powers and an exponential, so it lands in this shape. Keeping it
//! symbolic lets exact ties (such as `D1 = E1` for a single parameter) be
//! settled by integer arithmetic instead of an interval that never separates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::elementary::{eps_bits, ln_at, sqrt_point};
use super::interval::RatInterval;
use super::rational::Rational;

/// Exact powers larger than this many bits are left to interval refinement.
const MAX_EXACT_BITS: u64 = 1 << 22;

/// Width at which an undecided comparison is given up on.
pub const DEFAULT_PRECISION_CAP: &str = "1e-50";

/// Environment variable overriding [`DEFAULT_PRECISION_CAP`].
pub const PRECISION_CAP_VAR: &str = "PADE_CERTIFY_PRECISION_CAP";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogExpr {
    logs: BTreeMap<Rational, Rational>,
    roots: BTreeMap<Rational, Rational>,
    constant: Rational,
}

impl LogExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    /// `coeff * ln(arg)`; panics unless `arg > 0`.
    pub fn ln_scaled(arg: &Rational, coeff: &Rational) -> Self {
        let mut e = Self::zero();
        e.add_ln(arg, coeff);
        e
    }

    pub fn ln(arg: &Rational) -> Self {
        Self::ln_scaled(arg, &Rational::one())
    }

    /// `coeff * sqrt(arg)`; panics if `arg < 0`.
    pub fn sqrt_scaled(arg: &Rational, coeff: &Rational) -> Self {
        let mut e = Self::zero();
        e.add_sqrt(arg, coeff);
        e
    }

    pub fn add_ln(&mut self, arg: &Rational, coeff: &Rational) {
        assert!(arg.is_positive(), "logarithm of non-positive {arg}");
        if arg.is_one() || coeff.is_zero() {
            return;
        }
        let slot = self.logs.entry(arg.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.logs.remove(arg);
        }
    }

    pub fn add_sqrt(&mut self, arg: &Rational, coeff: &Rational) {
        assert!(!arg.is_negative(), "square root of negative {arg}");
        if arg.is_zero() || coeff.is_zero() {
            return;
        }
        if let Some(root) = exact_sqrt(arg) {
            self.constant += coeff * root;
            return;
        }
        let slot = self.roots.entry(arg.clone()).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.roots.remove(arg);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn plus(&self, other: &LogExpr) -> LogExpr {
        let mut out = self.clone();
        for (a, q) in &other.logs {
            out.add_ln(a, q);
        }
        for (b, p) in &other.roots {
            out.add_sqrt(b, p);
        }
        out.constant += &other.constant;
        out
    }

    pub fn minus(&self, other: &LogExpr) -> LogExpr {
        self.plus(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, q: &Rational) -> LogExpr {
        if q.is_zero() {
            return LogExpr::zero();
        }
        LogExpr {
            logs: self.logs.iter().map(|(a, c)| (a.clone(), c * q)).collect(),
            roots: self.roots.iter().map(|(b, c)| (b.clone(), c * q)).collect(),
            constant: &self.constant * q,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.logs.is_empty() && self.roots.is_empty() && self.constant.is_zero()
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    /// Enclosure whose width shrinks roughly like `2^-bits`.
    pub fn enclose(&self, bits: u32) -> RatInterval {
        let mut acc = RatInterval::point(self.constant.clone());
        let extra = 4 + (self.logs.len() + self.roots.len()).max(1).ilog2();
        for (a, q) in &self.logs {
            let magnitude = a.numer().bits() + a.denom().bits();
            let slack = magnitude_bits(q) + (64 - magnitude.leading_zeros()) + extra;
            let ln = ln_at(&RatInterval::point(a.clone()), bits + slack).expect("positive argument");
            acc = &acc + &ln.scale(q);
        }
        for (b, p) in &self.roots {
            let slack = magnitude_bits(p) + b.numer().bits() as u32 / 2 + extra;
            acc = &acc + &sqrt_point(b, bits + slack).scale(p);
        }
        acc
    }

    /// Enclosure of width at most `eps`.
    pub fn enclose_within(&self, eps: &Rational) -> RatInterval {
        let mut bits = eps_bits(eps) + 8;
        loop {
            let r = self.enclose(bits);
            if &r.width() <= eps {
                return r;
            }
            bits += bits / 2;
        }
    }

    /// Exact sign, when it can be read off without approximation: either the
    /// logarithmic part collapses to `ln(1)` or every part pushes the same way.
    pub fn exact_sign(&self) -> Option<Ordering> {
        let log_part = self.log_product_cmp_one();
        if self.roots.is_empty() && self.logs.is_empty() {
            return Some(self.constant.cmp(&Rational::zero()));
        }
        let log_part = log_part?;
        let rest_nonneg = !self.constant.is_negative() && self.roots.values().all(|p| p.is_positive());
        let rest_nonpos = !self.constant.is_positive() && self.roots.values().all(|p| p.is_negative());
        if self.constant.is_zero() && self.roots.is_empty() {
            return Some(log_part);
        }
        // the non-logarithmic rest is nonzero here, so one-sided means strict
        match log_part {
            Ordering::Equal | Ordering::Greater if rest_nonneg => Some(Ordering::Greater),
            Ordering::Equal | Ordering::Less if rest_nonpos => Some(Ordering::Less),
            _ => None,
        }
    }

    /// Sign of `sum q_i ln a_i`, by comparing `prod a_i^{q_i L}` with 1.
    fn log_product_cmp_one(&self) -> Option<Ordering> {
        if self.logs.is_empty() {
            return Some(Ordering::Equal);
        }
        let l = self
            .logs
            .values()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut up = Rational::one();
        let mut down = Rational::one();
        for (a, q) in &self.logs {
            let e = (q * Rational::from_integer(l.clone())).to_integer();
            let size = a.numer().bits() + a.denom().bits();
            let k = e
                .abs()
                .to_u64()
                .filter(|&k| k.saturating_mul(size) <= MAX_EXACT_BITS)?;
            let power = num_traits::pow(a.clone(), k as usize);
            if e.is_positive() {
                up *= power;
            } else {
                down *= power;
            }
        }
        Some(up.cmp(&down))
    }
}

fn magnitude_bits(q: &Rational) -> u32 {
    let b = q.numer().bits() as i64 - q.denom().bits() as i64 + 1;
    b.max(0) as u32
}

fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

impl fmt::Display for LogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_zero() || (self.logs.is_empty() && self.roots.is_empty()) {
            parts.push(self.constant.to_string());
        }
        for (a, q) in &self.logs {
            parts.push(format!("({q})*ln({a})"));
        }
        for (b, p) in &self.roots {
            parts.push(format!("({p})*sqrt({b})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl Status {
    /// `Fail` dominates `Undecided`, which dominates `Pass`.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Pass,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
        })
    }
}

/// Result of deciding `x >= 0` for a real `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub status: Status,
    /// Last enclosure of `x`; a point when decided exactly.
    pub enclosure: RatInterval,
    /// True when settled by exact arithmetic.
    pub exact: bool,
}

/// Width cap for refinement: the environment override if it parses as a
/// positive rational (`1e-30` and `p/q` forms), else `1e-50`.
pub fn precision_cap() -> Rational {
    std::env::var(PRECISION_CAP_VAR)
        .ok()
        .and_then(|s| super::rational::parse_rational(s.trim()).ok())
        .filter(|q| q.is_positive())
        .unwrap_or_else(|| {
            super::rational::parse_rational(DEFAULT_PRECISION_CAP).expect("valid default cap")
        })
}

/// Starting working precision of the refinement loop, in bits.
pub const START_BITS: u32 = 24;

/// Refines `enclose(bits)` one bit at a time (halving the target width)
/// until the sign of the enclosed quantity is certain or the enclosure is
/// narrower than `cap`.
pub fn refine_sign(cap: &Rational, mut enclose: impl FnMut(u32) -> RatInterval) -> Decision {
    let last_bits = eps_bits(cap) + 64;
    let mut bits = START_BITS;
    loop {
        let r = enclose(bits);
        let status = if !r.lo().is_negative() {
            Some(Status::Pass)
        } else if r.hi().is_negative() {
            Some(Status::Fail)
        } else if &r.width() <= cap || bits >= last_bits {
            Some(Status::Undecided)
        } else {
            None
        };
        if let Some(status) = status {
            return Decision {
                status,
                enclosure: r,
                exact: false,
            };
        }
        bits += 1;
    }
}

/// Decides `expr >= 0`, exactly when possible.
pub fn decide_nonneg(expr: &LogExpr, cap: &Rational) -> Decision {
    if let Some(sign) = expr.exact_sign() {
        let status = if sign == Ordering::Less {
            Status::Fail
        } else {
            Status::Pass
        };
        let enclosure = if sign == Ordering::Equal {
            RatInterval::zero()
        } else {
            expr.enclose(START_BITS)
        };
        return Decision {
            status,
            enclosure,
            exact: true,
        };
    }
    refine_sign(cap, |bits| expr.enclose(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, rat};

    #[test]
    fn exact_tie_is_decided() {
        // ln(2^6) - 6 ln 2 = 0
        let e = LogExpr::ln(&int(64)).minus(&LogExpr::ln_scaled(&int(2), &int(6)));
        assert_eq!(e.exact_sign(), Some(Ordering::Equal));
        let d = decide_nonneg(&e, &rat(1, 1000));
        assert_eq!(d.status, Status::Pass);
        assert!(d.exact);
    }

    #[test]
    fn one_sided_parts_are_exact() {
        // ln(3/2) + 5 > 0 without any approximation
        let mut e = LogExpr::ln(&rat(3, 2));
        e.add_constant(&int(5));
        assert_eq!(e.exact_sign(), Some(Ordering::Greater));
        // ln(2) - 1 needs refinement
        let mut f = LogExpr::ln(&int(2));
        f.add_constant(&int(-1));
        assert_eq!(f.exact_sign(), None);
        let d = decide_nonneg(&f, &rat(1, 1000));
        assert_eq!(d.status, Status::Fail);
        assert!(!d.exact);
    }

    #[test]
    fn perfect_square_roots_fold_into_constant() {
        let e = LogExpr::sqrt_scaled(&rat(9, 4), &int(2));
        assert_eq!(e, LogExpr::constant(int(3)));
        let g = LogExpr::sqrt_scaled(&int(2), &int(1));
        let r = g.enclose(60);
        assert!(r.lo() * r.lo() <= int(2) && r.hi() * r.hi() >= int(2));
        assert!(r.width() < rat(1, 1 << 50));
    }

    #[test]
    fn enclosure_width_tracks_bits() {
        let mut e = LogExpr::ln_scaled(&int(1_000_003), &rat(7, 3));
        e.add_sqrt(&int(5), &int(-11));
        for bits in [20, 60, 120] {
            let r = e.enclose(bits);
            assert!(r.width() < Rational::new(BigInt::one(), BigInt::one() << bits));
        }
        let w = e.enclose_within(&rat(1, 1 << 40));
        assert!(w.width() <= rat(1, 1 << 40));
    }

    #[test]
    fn undecided_at_cap() {
        // an enclosure that keeps straddling zero
        let d = refine_sign(&rat(1, 1 << 30), |bits| {
            let w = Rational::new(BigInt::one(), BigInt::one() << bits);
            RatInterval::new(-w.clone(), w)
        });
        assert_eq!(d.status, Status::Undecided);
    }

    #[test]
    fn status_combination() {
        use Status::*;
        assert_eq!(Pass.combine(Undecided), Undecided);
        assert_eq!(Undecided.combine(Fail), Fail);
        assert_eq!(Pass.combine(Pass), Pass);
    }
}
