//! Rational scalars and the small helpers the rest of the crate leans on.
//!
//! `Rational` is `num_rational::BigRational`, which is always kept reduced
//! with a positive denominator, so structural equality is value equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{PadeError, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p"`, `"p/q"`, a plain decimal such as `"-0.25"`, or a decimal
/// with an exponent such as `"1e-50"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(PadeError::Parse(format!("empty rational in {text:?}")));
    }
    if !s.contains('/') {
        if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
            let e: i32 = exp
                .parse()
                .map_err(|_| PadeError::Parse(format!("bad exponent in {text:?}")))?;
            if e.unsigned_abs() > 100_000 {
                return Err(PadeError::Parse(format!("exponent out of range in {text:?}")));
            }
            let ten = Rational::from_integer(num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize));
            let m = parse_rational(mantissa)?;
            return Ok(if e >= 0 { m * ten } else { m / ten });
        }
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| PadeError::Parse(format!("bad numerator in {text:?}")))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| PadeError::Parse(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(PadeError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let mag: BigInt = digits
            .parse()
            .map_err(|_| PadeError::Parse(format!("bad decimal {text:?}")))?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(mag, scale);
        return Ok(if negative { -value } else { value });
    }
    let num: BigInt = s
        .parse()
        .map_err(|_| PadeError::Parse(format!("bad rational {text:?}")))?;
    Ok(Rational::from_integer(num))
}

/// Canonical string form: `"p/q"`, or `"p"` when `q == 1`.
pub fn to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Row `k` of Pascal's triangle, built by the additive recurrence.
pub fn binomial_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row
}

/// `(q)_n = q (q+1) ... (q+n-1)`, with `(q)_0 = 1`.
pub fn rising_factorial(q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = q.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// The bracket factorial `[nu] = (lambda+1)(lambda+2)...(lambda+nu) = (lambda+1)_nu`.
pub fn bracket_factorial(lambda: &Rational, nu: usize) -> Result<Rational> {
    if lambda.is_integer() && lambda.is_negative() {
        let reach = to_u64(&-lambda).unwrap_or(u64::MAX);
        if nu as u64 >= reach {
            return Err(PadeError::ZeroFactor {
                lambda: lambda.to_string(),
                nu,
            });
        }
    }
    Ok(rising_factorial(&(lambda + Rational::one()), nu))
}

/// Falling factorial `x (x-1) ... (x-k+1)`.
pub fn falling_factorial(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..k {
        acc *= &factor;
        factor -= Rational::one();
    }
    acc
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| if v.is_zero() { acc } else { acc.lcm(v) })
}

/// Converts a small nonnegative integer rational to `u64`.
pub fn to_u64(q: &Rational) -> Option<u64> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    u64::try_from(q.to_integer()).ok()
}

pub(crate) mod serde_bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.trim().parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&rat(7, 3), 0), int(1));
        assert_eq!(rising_factorial(&int(1), 4), int(24));
        assert_eq!(rising_factorial(&rat(1, 2), 3), rat(15, 8));
    }

    #[test]
    fn bracket_factorial_examples() {
        assert_eq!(bracket_factorial(&int(0), 5).unwrap(), int(120));
        assert_eq!(bracket_factorial(&rat(1, 2), 2).unwrap(), rat(15, 4));
        assert_eq!(bracket_factorial(&rat(-9, 7), 0).unwrap(), int(1));
        assert!(bracket_factorial(&int(-3), 3).is_err());
        assert!(bracket_factorial(&int(-3), 2).is_ok());
    }

    #[test]
    fn parse_and_print_round_trip() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(to_string(&rat(4, 2)), "2");
        assert_eq!(to_string(&rat(-1, 3)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = rat(0, -7);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn pascal_rows() {
        let row = binomial_row(5);
        let expect: Vec<BigInt> = [1, 5, 10, 10, 5, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, expect);
    }
}
