//! Rigorous enclosures of `exp`, `ln` and `sqrt` with rational endpoints.
//!
//! The `*_at` functions work at a working precision given in bits and make
//! no promise about width; the `*_enclosure` functions raise the precision
//! until the requested width is met.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fixed::FixedInterval;
use super::interval::RatInterval;
use super::rational::{int, rat, Rational};
use crate::error::{PadeError, Result};

const LN2_CACHE_BITS: u32 = 2048;

/// Number of bits needed to resolve `eps`, i.e. roughly `log2(1/eps)`.
pub fn eps_bits(eps: &Rational) -> u32 {
    let b = eps.denom().bits() as i64 - eps.numer().bits() as i64 + 2;
    b.clamp(1, u32::MAX as i64 / 4) as u32
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << (k as usize)
}

/// Taylor series of `exp` on an interval `r` with `|r| <= 1/2`.
fn exp_small(r: &RatInterval, wp: u32) -> RatInterval {
    let mut sum = RatInterval::one();
    let mut term = RatInterval::one();
    let cutoff = Rational::new(BigInt::one(), pow2(u64::from(wp) + 2));
    let mut n = 1u64;
    loop {
        term = (&term * r).scale(&Rational::new(BigInt::one(), BigInt::from(n))).round_out(wp);
        sum = (&sum + &term).round_out(wp);
        let next = term.mag() * r.mag() / int(n as i64 + 1);
        if next < cutoff {
            // remaining terms are dominated by a geometric series of ratio <= 1/2
            let tail = next * int(2);
            return RatInterval::new(sum.lo() - &tail, sum.hi() + &tail).round_out(wp);
        }
        n += 1;
    }
}

fn exp_point(q: &Rational, prec: u32) -> RatInterval {
    if q.is_zero() {
        return RatInterval::one();
    }
    let mag_bits = q.numer().bits() as i64 - q.denom().bits() as i64 + 1;
    let k = (mag_bits + 1).max(0) as u64;
    let wp = prec + k as u32 + 24;
    let r = Rational::new(q.numer().clone(), q.denom() * pow2(k));
    let r_enc = RatInterval::point(r).round_out(wp + 8);
    let lo_r = RatInterval::point(r_enc.lo().clone());
    let hi_r = RatInterval::point(r_enc.hi().clone());
    let mut lo = exp_small(&lo_r, wp).lo().clone();
    let mut hi = exp_small(&hi_r, wp).hi().clone();
    for _ in 0..k {
        lo = super::interval::round_toward(&(&lo * &lo), wp, false);
        hi = super::interval::round_toward(&(&hi * &hi), wp, true);
    }
    RatInterval::new(lo, hi).round_out(prec + 8)
}

/// `exp` applied to every point of `x`, at working precision `prec`.
pub fn exp_at(x: &RatInterval, prec: u32) -> RatInterval {
    if x.is_point() {
        return exp_point(x.lo(), prec);
    }
    let lo = exp_point(x.lo(), prec).lo().clone();
    let hi = exp_point(x.hi(), prec).hi().clone();
    RatInterval::new(lo, hi)
}

/// `2 atanh(t)` for an interval `t` with `|t| <= 1/3`, summed in fixed
/// point with a few guard bits beyond `wp`.
fn two_atanh(t: &RatInterval, wp: u32) -> RatInterval {
    if t.is_point() && t.lo().is_zero() {
        return RatInterval::zero();
    }
    let w = wp + 16 + (64 - u64::from(wp).leading_zeros());
    let t = FixedInterval::from_interval(t, w);
    let t2 = t.mul(&t, w);
    let mut power = t.clone();
    let mut sum = t;
    let cutoff = BigInt::one() << (2 * w - wp - 4) as usize;
    let mut n = 1u64;
    loop {
        power = power.mul(&t2, w);
        sum = sum.add(&power.div_int(2 * n + 1));
        let next = power.mag() * t2.mag();
        if next < cutoff {
            // sum_{k > n} |t|^{2k+1}/(2k+1) <= |t|^{2n+3} / (1 - t^2) <= 2 |t|^{2n+3}
            let tail = (next >> w as usize) * 2 + 2;
            return sum.widen(&tail).to_interval(w).scale(&int(2)).round_out(wp);
        }
        n += 1;
    }
}

fn ln2_uncached(wp: u32) -> RatInterval {
    two_atanh(&RatInterval::point(rat(1, 3)), wp + 4)
}

/// Enclosure of `ln 2` good to about `prec` bits.
pub fn ln2(prec: u32) -> RatInterval {
    static CACHE: OnceLock<RatInterval> = OnceLock::new();
    if prec + 16 <= LN2_CACHE_BITS {
        CACHE
            .get_or_init(|| ln2_uncached(LN2_CACHE_BITS))
            .round_out(prec + 8)
    } else {
        ln2_uncached(prec + 16)
    }
}

thread_local! {
    static LN_MEMO: RefCell<HashMap<(Rational, u32), RatInterval>> = RefCell::new(HashMap::new());
}

const LN_MEMO_LIMIT: usize = 1 << 14;

/// Certificates take logs of the same handful of arguments over and over,
/// so results are memoized per thread.
fn ln_point(q: &Rational, prec: u32) -> RatInterval {
    // long arguments: q in [m_lo, m_hi] 2^-shift with short m, ln is increasing
    let short = u64::from(prec) + 64;
    if q.numer().bits() > short || q.denom().bits() > short {
        let shift = i64::from(prec) + 32 - (q.numer().bits() as i64 - q.denom().bits() as i64);
        let (num, den) = if shift >= 0 {
            (q.numer() << shift as usize, q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << (-shift) as usize)
        };
        let lo = ln_point(&Rational::from_integer(num_integer::Integer::div_floor(&num, &den)), prec);
        let hi = ln_point(&Rational::from_integer(num_integer::Integer::div_ceil(&num, &den)), prec);
        let wp = prec + 64 - (shift.unsigned_abs().max(1)).leading_zeros();
        let offset = ln2(wp).scale(&int(shift));
        return (&RatInterval::new(lo.lo().clone(), hi.hi().clone()) - &offset).round_out(prec + 8);
    }
    let key = (q.clone(), prec);
    if let Some(hit) = LN_MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let value = ln_point_uncached(q, prec);
    LN_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= LN_MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, value.clone());
    });
    value
}

fn ln_point_uncached(q: &Rational, prec: u32) -> RatInterval {
    debug_assert!(q.is_positive());
    if q.is_one() {
        return RatInterval::zero();
    }
    let mut j = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut y = if j >= 0 {
        Rational::new(q.numer().clone(), q.denom() * pow2(j as u64))
    } else {
        Rational::new(q.numer() * pow2((-j) as u64), q.denom().clone())
    };
    let upper = rat(4, 3);
    let lower = rat(2, 3);
    while y > upper {
        y /= int(2);
        j += 1;
    }
    while y < lower {
        y *= int(2);
        j -= 1;
    }
    let j_bits = 64 - j.unsigned_abs().leading_zeros();
    let wp = prec + j_bits + 12;
    let t = (&y - Rational::one()) / (&y + Rational::one());
    let t_enc = RatInterval::point(t).round_out(wp + 4);
    let ln_y = two_atanh(&t_enc, wp);
    let scaled = if j == 0 {
        RatInterval::zero()
    } else {
        ln2(wp).scale(&int(j))
    };
    (&scaled + &ln_y).round_out(prec + 8)
}

/// `ln` applied to every point of `x` (which must be positive).
pub fn ln_at(x: &RatInterval, prec: u32) -> Result<RatInterval> {
    if !x.is_positive() {
        return Err(PadeError::Domain(format!("log of non-positive interval {x}")));
    }
    if x.is_point() {
        return Ok(ln_point(x.lo(), prec));
    }
    let lo = ln_point(x.lo(), prec).lo().clone();
    let hi = ln_point(x.hi(), prec).hi().clone();
    Ok(RatInterval::new(lo, hi))
}

/// Square root enclosure of a nonnegative rational on the dyadic grid
/// `1/(den * 2^k)`. Refining `prec` only ever shrinks the result for a fixed
/// input, because the grids are nested.
pub fn sqrt_point(q: &Rational, prec: u32) -> RatInterval {
    assert!(!q.is_negative(), "sqrt of negative rational {q}");
    if q.is_zero() {
        return RatInterval::zero();
    }
    let prod = q.numer() * q.denom();
    let target = 2 * u64::from(prec) + 4;
    let k = if prod.bits() >= target {
        0
    } else {
        (target - prod.bits()).div_ceil(2)
    };
    let scaled = &prod << (2 * k as usize);
    let s = scaled.sqrt();
    let den = q.denom() * pow2(k);
    if &s * &s == scaled {
        return RatInterval::point(Rational::new(s, den));
    }
    RatInterval::new(Rational::new(s.clone(), den.clone()), Rational::new(s + 1, den))
}

pub fn sqrt_at(x: &RatInterval, prec: u32) -> RatInterval {
    let lo = sqrt_point(&x.lo().max(&Rational::zero()).clone(), prec);
    if x.is_point() {
        return lo;
    }
    let hi = sqrt_point(x.hi(), prec);
    RatInterval::new(lo.lo().clone(), hi.hi().clone())
}

fn refine_until(eps: &Rational, mut f: impl FnMut(u32) -> RatInterval) -> RatInterval {
    let mut prec = eps_bits(eps) + 32;
    loop {
        let r = f(prec);
        if &r.width() <= eps {
            return r;
        }
        prec = prec.saturating_mul(2);
    }
}

/// Interval of width at most `eps` containing `e^x`.
pub fn exp_enclosure(x: &Rational, eps: &Rational) -> RatInterval {
    assert!(eps.is_positive(), "eps must be positive");
    let point = RatInterval::point(x.clone());
    refine_until(eps, |p| exp_at(&point, p))
}

/// Interval of width at most `eps` containing `ln x`.
pub fn log_enclosure(x: &Rational, eps: &Rational) -> Result<RatInterval> {
    assert!(eps.is_positive(), "eps must be positive");
    if !x.is_positive() {
        return Err(PadeError::Domain(format!("log of {x}")));
    }
    let point = RatInterval::point(x.clone());
    Ok(refine_until(eps, |p| ln_point(point.lo(), p)))
}

/// Interval of width at most `eps` containing `sqrt x`.
pub fn sqrt_enclosure(x: &Rational, eps: &Rational) -> RatInterval {
    assert!(eps.is_positive(), "eps must be positive");
    refine_until(eps, |p| sqrt_point(x, p))
}

/// Euler's number.
pub fn e_at(prec: u32) -> RatInterval {
    exp_point(&Rational::one(), prec)
}
