//! Intervals of fixed-point numbers `[lo, hi] * 2^-w` over `BigInt`.
//!
//! Long chains of interval products over `Rational` spend most of their time
//! in gcd reductions; with a shared binary scale every operation is an
//! integer product and a shift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::interval::RatInterval;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedInterval {
    lo: BigInt,
    hi: BigInt,
}

fn floor_scaled(q: &Rational, w: u32) -> BigInt {
    Integer::div_floor(&(q.numer() << w as usize), q.denom())
}

fn ceil_scaled(q: &Rational, w: u32) -> BigInt {
    Integer::div_ceil(&(q.numer() << w as usize), q.denom())
}

impl FixedInterval {
    pub fn zero() -> Self {
        Self {
            lo: BigInt::default(),
            hi: BigInt::default(),
        }
    }

    /// Smallest interval of the grid `2^-w Z` containing `x`.
    pub fn from_interval(x: &RatInterval, w: u32) -> Self {
        Self {
            lo: floor_scaled(x.lo(), w),
            hi: ceil_scaled(x.hi(), w),
        }
    }

    pub fn from_rational(q: &Rational, w: u32) -> Self {
        Self {
            lo: floor_scaled(q, w),
            hi: ceil_scaled(q, w),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    /// Product at the same scale `w`, rounded outward.
    pub fn mul(&self, other: &Self, w: u32) -> Self {
        let p = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = p.iter().min().expect("four products");
        let max = p.iter().max().expect("four products");
        // `>>` on BigInt rounds toward negative infinity
        Self {
            lo: min >> w as usize,
            hi: -((-max) >> w as usize),
        }
    }

    /// Division by a positive integer, rounded outward.
    pub fn div_int(&self, k: u64) -> Self {
        let k = BigInt::from(k);
        Self {
            lo: Integer::div_floor(&self.lo, &k),
            hi: Integer::div_ceil(&self.hi, &k),
        }
    }

    /// Largest absolute value, in units of `2^-w`.
    pub fn mag(&self) -> BigInt {
        self.lo.magnitude().max(self.hi.magnitude()).clone().into()
    }

    /// `[lo - r, hi + r]`.
    pub fn widen(&self, r: &BigInt) -> Self {
        Self {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    pub fn to_interval(&self, w: u32) -> RatInterval {
        let scale = BigInt::one() << w as usize;
        RatInterval::new(
            Rational::new(self.lo.clone(), scale.clone()),
            Rational::new(self.hi.clone(), scale),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn thirds() {
        let x = FixedInterval::from_rational(&rat(1, 3), 10).to_interval(10);
        assert!(x.contains(&rat(1, 3)));
        assert_eq!(x.width(), rat(1, 1024));
        let exact = FixedInterval::from_rational(&rat(3, 4), 10).to_interval(10);
        assert!(exact.is_point());
    }

    proptest! {
        #[test]
        fn operations_enclose_the_exact_result(
            a in (-500i64..500, 1i64..50),
            b in (-500i64..500, 1i64..50),
            w in 1u32..40,
        ) {
            let (qa, qb) = (rat(a.0, a.1), rat(b.0, b.1));
            let (fa, fb) = (FixedInterval::from_rational(&qa, w), FixedInterval::from_rational(&qb, w));
            prop_assert!(fa.mul(&fb, w).to_interval(w).contains(&(&qa * &qb)));
            prop_assert!(fa.add(&fb).to_interval(w).contains(&(&qa + &qb)));
            prop_assert!(fa.sub(&fb).to_interval(w).contains(&(&qa - &qb)));
            prop_assert!(fa.div_int(7).to_interval(w).contains(&(&qa / rat(7, 1))));
        }
    }
}
