//! Integers and elements of `Q` and of imaginary quadratic fields `Q(sqrt(-d))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::RatInterval;
use super::rational::{int, rat, Rational};
use crate::error::{PadeError, Result};

pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// `d = 0` selects `Q`; otherwise `d` must be squarefree.
pub fn check_field(d: u64) -> Result<()> {
    if d == 0 || is_squarefree(d) {
        Ok(())
    } else {
        Err(PadeError::InvalidField(d))
    }
}

/// Whether the ring of integers of `Q(sqrt(-d))` needs the half-integer basis.
pub fn has_half_basis(d: u64) -> bool {
    d % 4 == 3
}

/// `x + y*omega` with `omega = sqrt(-d)` or, when `half_basis`,
/// `omega = (1 + sqrt(-d))/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticInt {
    d: u64,
    #[serde(with = "super::rational::serde_bigint_str")]
    x: BigInt,
    #[serde(with = "super::rational::serde_bigint_str")]
    y: BigInt,
    half_basis: bool,
}

impl QuadraticInt {
    pub fn new(d: u64, x: BigInt, y: BigInt, half_basis: bool) -> Result<Self> {
        check_field(d)?;
        if d == 0 && !y.is_zero() {
            return Err(PadeError::InvalidQuadratic("d = 0 requires y = 0".into()));
        }
        if half_basis && !has_half_basis(d) {
            return Err(PadeError::InvalidQuadratic(format!(
                "half-integer basis needs d = 3 mod 4, got d = {d}"
            )));
        }
        Ok(Self { d, x, y, half_basis })
    }

    pub fn rational_int(n: BigInt) -> Self {
        Self {
            d: 0,
            x: n,
            y: BigInt::zero(),
            half_basis: false,
        }
    }

    /// An ordinary integer viewed inside `Q(sqrt(-d))`.
    pub fn from_int(d: u64, n: BigInt) -> Self {
        Self {
            d,
            x: n,
            y: BigInt::zero(),
            half_basis: has_half_basis(d),
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn half_basis(&self) -> bool {
        self.half_basis
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_elem(&self) -> QuadElem {
        if self.half_basis {
            let half_y = Rational::new(self.y.clone(), BigInt::from(2));
            QuadElem {
                d: self.d,
                re: Rational::from_integer(self.x.clone()) + &half_y,
                im: half_y,
            }
        } else {
            QuadElem {
                d: self.d,
                re: Rational::from_integer(self.x.clone()),
                im: Rational::from_integer(self.y.clone()),
            }
        }
    }

    /// Exact `|z|^2`.
    pub fn abs_squared(&self) -> Rational {
        self.to_elem().norm()
    }
}

impl fmt::Display for QuadraticInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let sym = if self.d == 1 && !self.half_basis { "i" } else { "w" };
        let coeff = if self.y.is_one() {
            String::new()
        } else if (-&self.y).is_one() {
            "-".to_string()
        } else {
            self.y.to_string()
        };
        if self.x.is_zero() {
            return write!(f, "{coeff}{sym}");
        }
        if self.y.is_negative() {
            write!(f, "{}{coeff}{sym}", self.x)
        } else {
            write!(f, "{}+{coeff}{sym}", self.x)
        }
    }
}

/// An element `re + im*sqrt(-d)` of `Q(sqrt(-d))` (`im = 0` when `d = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: u64,
    re: Rational,
    im: Rational,
}

impl QuadElem {
    pub fn new(d: u64, re: Rational, im: Rational) -> Self {
        debug_assert!(d != 0 || im.is_zero());
        Self { d, re, im }
    }

    pub fn from_rational(d: u64, q: Rational) -> Self {
        Self {
            d,
            re: q,
            im: Rational::zero(),
        }
    }

    pub fn zero(d: u64) -> Self {
        Self::from_rational(d, Rational::zero())
    }

    pub fn one(d: u64) -> Self {
        Self::from_rational(d, Rational::one())
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    /// Coefficient of `sqrt(-d)`; the imaginary part is `im * sqrt(d)`.
    pub fn im_coeff(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|^2 = re^2 + d im^2`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + int(self.d as i64) * &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Self {
            d: self.d,
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = int(self.d as i64);
        Self {
            d: self.d,
            re: &self.re * &other.re - d * &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            d: self.d,
            re: &self.re * q,
            im: &self.im * q,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let n = other.norm();
        if n.is_zero() {
            return Err(PadeError::DivisionByZero);
        }
        Ok(self.mul(&other.conj()).scale(&n.recip()))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.d);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Membership in the ring of integers `Z_K`.
    pub fn is_integral(&self) -> bool {
        if self.d == 0 || !has_half_basis(self.d) {
            return self.re.is_integer() && self.im.is_integer();
        }
        let two = int(2);
        let a = &self.re * &two;
        let b = &self.im * &two;
        a.is_integer() && b.is_integer() && (a.to_integer() - b.to_integer()).is_even()
    }

    /// Converts back to integral coordinates, using the half basis when the
    /// field has one.
    pub fn to_quadratic_int(&self) -> Option<QuadraticInt> {
        if !self.is_integral() {
            return None;
        }
        if has_half_basis(self.d) {
            let y = (&self.im * int(2)).to_integer();
            let x = (&self.re - &self.im).to_integer();
            Some(QuadraticInt {
                d: self.d,
                x,
                y,
                half_basis: true,
            })
        } else {
            Some(QuadraticInt {
                d: self.d,
                x: self.re.to_integer(),
                y: self.im.to_integer(),
                half_basis: false,
            })
        }
    }

    /// Real and imaginary parts as intervals; the imaginary part is
    /// `im * sqrt(d)`, exact when `d` is a perfect square.
    pub fn parts_at(&self, prec: u32) -> (RatInterval, RatInterval) {
        let re = RatInterval::point(self.re.clone());
        if self.im.is_zero() {
            return (re, RatInterval::zero());
        }
        let root = super::elementary::sqrt_point(&int(self.d as i64), prec);
        (re, root.scale(&self.im))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + ({})*sqrt(-{})", self.re, self.im, self.d)
        }
    }
}

/// Parses a quadratic integer literal such as `3`, `-2w`, `1+2w` or, in
/// `Q(i)`, `1-i`. `w` is the standard integral basis element of the field.
pub fn parse_quadratic_int(text: &str, d: u64) -> Result<QuadraticInt> {
    check_field(d)?;
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '(' && *c != ')')
        .collect();
    let s = if d == 1 { s.replace('i', "w") } else { s };
    let bad = || PadeError::Parse(format!("bad quadratic integer {text:?}"));
    let Some(body) = s.strip_suffix('w') else {
        if s.contains('w') {
            return Err(bad());
        }
        let x: BigInt = s.parse().map_err(|_| bad())?;
        return Ok(QuadraticInt::from_int(d, x));
    };
    if d == 0 {
        return Err(PadeError::InvalidQuadratic(format!(
            "{text:?} uses w but the field is Q"
        )));
    }
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (x_part, y_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let x: BigInt = x_part.parse().map_err(|_| bad())?;
    let y: BigInt = match y_part {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
    };
    QuadraticInt::new(d, x, y, has_half_basis(d))
}

/// A nonzero field element given as `a/b` with `a, b` in `Z_K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicRatio {
    pub num: QuadraticInt,
    pub den: QuadraticInt,
}

impl AlgebraicRatio {
    pub fn new(num: QuadraticInt, den: QuadraticInt) -> Result<Self> {
        if num.d() != den.d() {
            return Err(PadeError::FieldMismatch(num.d(), den.d()));
        }
        if den.is_zero() {
            return Err(PadeError::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    /// A rational `p/q` in lowest terms, embedded in `Q(sqrt(-d))`.
    pub fn from_rational(d: u64, q: &Rational) -> Self {
        Self {
            num: QuadraticInt::from_int(d, q.numer().clone()),
            den: QuadraticInt::from_int(d, q.denom().clone()),
        }
    }

    /// `"p/q"`, `"a"` or `"(a)/(b)"` with quadratic literals for `a`, `b`.
    pub fn parse(text: &str, d: u64) -> Result<Self> {
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a, b),
            None => (text, "1"),
        };
        let num = parse_quadratic_int(num, d)?;
        let den = parse_quadratic_int(den, d)?;
        if d == 0 {
            if den.is_zero() {
                return Err(PadeError::DivisionByZero);
            }
            let q = Rational::new(num.x().clone(), den.x().clone());
            return Ok(Self::from_rational(0, &q));
        }
        Self::new(num, den)
    }

    pub fn d(&self) -> u64 {
        self.num.d()
    }

    pub fn value(&self) -> QuadElem {
        self.num
            .to_elem()
            .div(&self.den.to_elem())
            .expect("denominator checked nonzero")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn abs_squared(&self) -> Rational {
        self.value().norm()
    }

    pub fn den_abs_squared(&self) -> Rational {
        self.den.abs_squared()
    }

    /// `|alpha|^2 <= 1`.
    pub fn within_unit_disc(&self) -> bool {
        self.abs_squared() <= rat(1, 1)
    }
}

impl fmt::Display for AlgebraicRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.abs_squared().is_one() && self.den.y().is_zero() && self.den.x().is_one() {
            write!(f, "{}", self.num)
        } else if self.num.y().is_zero() && self.den.y().is_zero() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
