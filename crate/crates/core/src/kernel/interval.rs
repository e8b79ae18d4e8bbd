//! Closed intervals with rational endpoints.
//!
//! Every operation returns an interval that contains every value the exact
//! operation can take on its inputs. `round_out` trades width for endpoint
//! size by moving each endpoint outward to a dyadic rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Self { lo: q.clone(), hi: q }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn one() -> Self {
        Self::point(Rational::one())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn overlaps(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        Self::try_new(lo, hi)
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        Self {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Rational {
        (&self.lo.abs()).max(&self.hi.abs()).clone()
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else {
            (&self.lo.abs()).min(&self.hi.abs()).clone()
        }
    }

    pub fn abs(&self) -> RatInterval {
        Self {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn sqr(&self) -> RatInterval {
        let a = self.mig();
        let b = self.mag();
        Self {
            lo: &a * &a,
            hi: &b * &b,
        }
    }

    pub fn pow(&self, n: u32) -> RatInterval {
        let mut acc = RatInterval::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        if n.is_multiple_of(2) && self.contains_zero() {
            acc.lo = Rational::zero();
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> RatInterval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if q.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }

    pub fn add_rational(&self, q: &Rational) -> RatInterval {
        Self {
            lo: &self.lo + q,
            hi: &self.hi + q,
        }
    }

    /// `None` if the interval contains zero.
    pub fn recip(&self) -> Option<RatInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &RatInterval) -> Option<RatInterval> {
        other.recip().map(|r| self * &r)
    }

    /// Pointwise maximum of two real quantities.
    pub fn max(&self, other: &RatInterval) -> RatInterval {
        Self {
            lo: (&self.lo).max(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    pub fn max_rational(&self, q: &Rational) -> RatInterval {
        self.max(&RatInterval::point(q.clone()))
    }

    /// Moves both endpoints outward onto dyadic rationals carrying about
    /// `bits` significant bits. Endpoints that are already short are kept.
    pub fn round_out(&self, bits: u32) -> RatInterval {
        Self {
            lo: round_toward(&self.lo, bits, false),
            hi: round_toward(&self.hi, bits, true),
        }
    }

    /// Certain comparison: `Some(Less)` when every point of `self` is below
    /// every point of `other`, `None` when they overlap in more than a point.
    pub fn certainly_cmp(&self, other: &RatInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

pub(crate) fn round_toward(q: &Rational, bits: u32, up: bool) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let (n, d) = (q.numer(), q.denom());
    let limit = u64::from(bits) + 2;
    if n.bits() <= limit && d.bits() <= limit {
        return q.clone();
    }
    let e = n.bits() as i64 - d.bits() as i64;
    let shift = i64::from(bits) - e;
    let (num, den) = if shift >= 0 {
        (n << (shift as usize), d.clone())
    } else {
        (n.clone(), d << ((-shift) as usize))
    };
    let m = if up {
        Integer::div_ceil(&num, &den)
    } else {
        Integer::div_floor(&num, &den)
    };
    if shift >= 0 {
        Rational::new(m, BigInt::one() << (shift as usize))
    } else {
        Rational::from_integer(m << ((-shift) as usize))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: RatInterval) -> RatInterval {
        &self + &rhs
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Sub for RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: RatInterval) -> RatInterval {
        &self - &rhs
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        -&self
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        RatInterval { lo, hi }
    }
}

impl Mul for RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: RatInterval) -> RatInterval {
        &self * &rhs
    }
}

/// Wire form: `["lo", "hi"]` with rational strings.
impl Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = super::rational::parse_rational(&lo).map_err(serde::de::Error::custom)?;
        let hi = super::rational::parse_rational(&hi).map_err(serde::de::Error::custom)?;
        RatInterval::try_new(lo, hi).ok_or_else(|| serde::de::Error::custom("lo > hi"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn arithmetic_encloses() {
        let a = RatInterval::new(rat(-1, 2), rat(3, 2));
        let b = RatInterval::new(int(2), int(3));
        assert_eq!(&a * &b, RatInterval::new(rat(-3, 2), rat(9, 2)));
        assert_eq!(&a - &b, RatInterval::new(rat(-7, 2), rat(-1, 2)));
        assert_eq!(a.sqr(), RatInterval::new(int(0), rat(9, 4)));
        assert!(a.recip().is_none());
        assert_eq!(b.recip().unwrap(), RatInterval::new(rat(1, 3), rat(1, 2)));
    }

    #[test]
    fn round_out_is_outward() {
        let q = Rational::new(BigInt::from(2).pow(70u32), BigInt::from(3).pow(45u32));
        let r = RatInterval::point(q.clone()).round_out(20);
        assert!(r.contains(&q));
        assert!(r.width() < &q * rat(1, 1 << 18));
        assert_eq!(r.lo().denom().bits(), r.lo().denom().trailing_zeros().unwrap() + 1);
    }

    proptest! {
        #[test]
        fn round_out_contains(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000, bits in 1u32..40) {
            let q = rat(n, d) * rat(1_000_003, 999_983) * rat(7_777_777, 3);
            let r = RatInterval::point(q.clone()).round_out(bits);
            prop_assert!(r.contains(&q));
        }
    }
}
