//! The series `phi_lambda(z) = sum_{nu >= 0} z^nu / [nu]` with
//! `[nu] = (lambda+1)(lambda+2)...(lambda+nu)`, and the parameter sets it is
//! used with.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PadeError, Result};
use crate::kernel::elementary::{exp_at, sqrt_point};
use crate::kernel::interval::RatInterval;
use crate::kernel::quadratic::{AlgebraicRatio, QuadElem};
use crate::kernel::rational::{bracket_factorial, is_integer, parse_rational, Rational};

/// Validated parameters `lambda_1, ..., lambda_m` with the derived sizes
/// `R = max |r_j|`, `S = max s_j` of `lambda_j = r_j / s_j`, and
/// `Rhat`, `Shat`, the same maxima over the differences `lambda_k - lambda_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaConfig {
    lambdas: Vec<Rational>,
    r: BigInt,
    s: BigInt,
    r_hat: BigInt,
    s_hat: BigInt,
}

impl LambdaConfig {
    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    /// `lambda_j` for `j = 1..=m`.
    pub fn lambda(&self, j: usize) -> &Rational {
        &self.lambdas[j - 1]
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn r_hat(&self) -> &BigInt {
        &self.r_hat
    }

    pub fn s_hat(&self) -> &BigInt {
        &self.s_hat
    }

    /// Denominators `s_1, ..., s_m`.
    pub fn denominators(&self) -> Vec<BigInt> {
        self.lambdas.iter().map(|l| l.denom().clone()).collect()
    }
}

/// Checks the hypotheses on the parameters: no `lambda_j` is a negative
/// integer and no two differ by an integer. Indices in errors are 1-based.
pub fn validate_config(lambdas: &[Rational]) -> Result<LambdaConfig> {
    if lambdas.is_empty() {
        return Err(PadeError::EmptyConfig);
    }
    for (j, l) in lambdas.iter().enumerate() {
        if is_integer(l) && l.is_negative() {
            return Err(PadeError::NegativeIntegerLambda(j + 1));
        }
    }
    let mut r_hat = BigInt::zero();
    let mut s_hat = BigInt::zero();
    for k in 1..lambdas.len() {
        for j in 0..k {
            let diff = &lambdas[k] - &lambdas[j];
            if is_integer(&diff) {
                return Err(PadeError::IntegerDifference(k + 1, j + 1));
            }
            r_hat = r_hat.max(diff.numer().abs());
            s_hat = s_hat.max(diff.denom().clone());
        }
    }
    let r = lambdas.iter().map(|l| l.numer().abs()).max().unwrap_or_default();
    let s = lambdas.iter().map(|l| l.denom().clone()).max().unwrap_or_default();
    if r_hat > BigInt::from(2) * &r * &s || s_hat > &s * &s {
        return Err(PadeError::InvariantViolation {
            row: 0,
            what: format!("Rhat = {r_hat} or Shat = {s_hat} exceeds 2RS or S^2"),
        });
    }
    Ok(LambdaConfig {
        lambdas: lambdas.to_vec(),
        r,
        s,
        r_hat,
        s_hat,
    })
}

/// Parses a comma separated list such as `0,1/2,-1/3`.
pub fn parse_lambdas(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_rational(t.trim()))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ConfigWire {
    lambdas: Vec<String>,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "S")]
    s: String,
    #[serde(rename = "Rhat")]
    r_hat: String,
    #[serde(rename = "Shat")]
    s_hat: String,
}

impl Serialize for LambdaConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigWire {
            lambdas: self.lambdas.iter().map(|l| l.to_string()).collect(),
            r: self.r.to_string(),
            s: self.s.to_string(),
            r_hat: self.r_hat.to_string(),
            s_hat: self.s_hat.to_string(),
        }
        .serialize(s)
    }
}

/// Derived fields are recomputed and must agree with the stored ones.
impl<'de> Deserialize<'de> for LambdaConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = ConfigWire::deserialize(d)?;
        let lambdas = wire
            .lambdas
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let config = validate_config(&lambdas).map_err(D::Error::custom)?;
        let stored = [&wire.r, &wire.s, &wire.r_hat, &wire.s_hat];
        let derived = [&config.r, &config.s, &config.r_hat, &config.s_hat];
        for (text, value) in stored.iter().zip(derived) {
            if text.trim() != value.to_string() {
                return Err(D::Error::custom(format!(
                    "stored constant {text} disagrees with recomputed {value}"
                )));
            }
        }
        Ok(config)
    }
}

/// `1 / [nu]`.
pub fn phi_coefficient(lambda: &Rational, nu: usize) -> Result<Rational> {
    Ok(bracket_factorial(lambda, nu)?.recip())
}

/// `|1/[nu]| <= (2 s^2)^nu / nu!` for `lambda = r/s` not a negative integer.
/// For `lambda > -1` this is immediate from `lambda + i >= i - 1 + 1/s`. In
/// general at most `2k` of the factors `|lambda + i|` are below `k`, and the
/// two smallest are at least `1/s`, so `[nu] >= (nu-2)! / (2^(nu-2) s^2)`.
fn tail_ratio(lambda: &Rational) -> Rational {
    let s = Rational::from_integer(lambda.denom().clone());
    Rational::from_integer(BigInt::from(2)) * &s * &s
}

/// Rigorous enclosure of `phi_lambda(alpha)` as `(real part, imaginary part)`,
/// each of width at most `eps`.
///
/// Levels `k = 1, 2, ...` each give an enclosure from an exact partial sum
/// and the tail majorant `x^(M+1)/(M+1)! * E` with `x >= 2 s^2 |alpha|` and
/// `E >= e^x` fixed in advance; `M` is the least truncation that pushes the
/// tail below `2^-k / 2`. The result intersects levels until both widths are
/// below `eps`, so a smaller `eps` always returns a subset.
pub fn phi_enclosure(
    lambda: &Rational,
    alpha: &AlgebraicRatio,
    eps: &Rational,
) -> Result<(RatInterval, RatInterval)> {
    assert!(eps.is_positive(), "eps must be positive");
    if is_integer(lambda) && lambda.is_negative() {
        return Err(PadeError::ZeroFactor {
            lambda: lambda.to_string(),
            nu: lambda.abs().to_integer().to_usize().unwrap_or(usize::MAX),
        });
    }
    let z = alpha.value();
    let d = z.d();
    if z.is_zero() {
        return Ok((RatInterval::one(), RatInterval::zero()));
    }
    let abs_upper = sqrt_point(&z.norm(), 32).hi().clone();
    let x = tail_ratio(lambda) * abs_upper;
    let e_upper = exp_at(&RatInterval::point(x.clone()), 32).hi().clone();

    let mut partial = QuadElem::one(d);
    let mut term = QuadElem::one(d);
    let mut m = 0usize;
    // x^(M+1)/(M+1)! for the current M
    let mut tail_power = x.clone();
    let mut re_acc: Option<RatInterval> = None;
    let mut im_acc: Option<RatInterval> = None;
    let mut level = 1u32;
    loop {
        let target = Rational::new(BigInt::one(), BigInt::one() << (level as usize + 1));
        while &tail_power * &e_upper > target {
            m += 1;
            let denom = lambda + Rational::from_integer(BigInt::from(m));
            term = term.mul(&z).scale(&denom.recip());
            partial = partial.add(&term);
            tail_power = tail_power * &x / Rational::from_integer(BigInt::from(m + 1));
        }
        let radius = &tail_power * &e_upper;
        let re = RatInterval::new(partial.re() - &radius, partial.re() + &radius);
        let im = if z.is_real() {
            RatInterval::zero()
        } else if partial.im_coeff().is_zero() {
            RatInterval::new(-radius.clone(), radius.clone())
        } else {
            let scale_bits = partial.im_coeff().numer().bits() + d.max(1).ilog2() as u64 + 4;
            let root = sqrt_point(&Rational::from_integer(BigInt::from(d)), level + scale_bits as u32);
            let centre = root.scale(partial.im_coeff());
            RatInterval::new(centre.lo() - &radius, centre.hi() + &radius)
        };
        let re_next = intersect_or(re_acc.take(), re);
        let im_next = intersect_or(im_acc.take(), im);
        if &re_next.width() <= eps && &im_next.width() <= eps {
            return Ok((re_next, im_next));
        }
        re_acc = Some(re_next);
        im_acc = Some(im_next);
        level += 1;
    }
}

fn intersect_or(acc: Option<RatInterval>, next: RatInterval) -> RatInterval {
    match acc {
        None => next,
        Some(a) => a
            .intersect(&next)
            .expect("enclosures of the same value always overlap"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::quadratic::parse_quadratic_int;
    use crate::kernel::rational::{factorial, int, rat};
    use proptest::prelude::*;

    fn real(q: Rational) -> AlgebraicRatio {
        AlgebraicRatio::from_rational(0, &q)
    }

    /// Partial sum of `sum x^nu/[nu]` with a crude ratio-test remainder.
    fn brute_force(lambda: &Rational, x: &Rational, terms: usize) -> (Rational, Rational) {
        let mut sum = Rational::zero();
        let mut t = Rational::one();
        for nu in 0..terms {
            sum += &t;
            t = t * x / (lambda + int(nu as i64 + 1));
        }
        // remaining terms shrink at least geometrically by 1/2 once nu > 2|x|
        let rem = t.abs() * int(2);
        (&sum - &rem, sum + rem)
    }

    #[test]
    fn config_examples() {
        let c = validate_config(&[int(0), rat(1, 2)]).unwrap();
        assert_eq!((c.r(), c.s()), (&BigInt::from(1), &BigInt::from(2)));
        assert_eq!((c.r_hat(), c.s_hat()), (&BigInt::from(1), &BigInt::from(2)));
        assert_eq!(
            validate_config(&[int(0), int(1)]),
            Err(PadeError::IntegerDifference(2, 1))
        );
        assert_eq!(validate_config(&[int(-2)]), Err(PadeError::NegativeIntegerLambda(1)));
        let single = validate_config(&[rat(-5, 3)]).unwrap();
        assert!(single.r_hat().is_zero() && single.s_hat().is_zero());
        assert_eq!(validate_config(&[]), Err(PadeError::EmptyConfig));
    }

    #[test]
    fn config_json_round_trip() {
        let c = validate_config(&[int(0), rat(1, 2)]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"lambdas":["0","1/2"],"R":"1","S":"2","Rhat":"1","Shat":"2"}"#);
        let back: LambdaConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let tampered = text.replace(r#""R":"1""#, r#""R":"7""#);
        assert!(serde_json::from_str::<LambdaConfig>(&tampered).is_err());
    }

    #[test]
    fn coefficient_examples() {
        for nu in 0..8 {
            assert_eq!(
                phi_coefficient(&int(0), nu).unwrap(),
                Rational::new(BigInt::one(), factorial(nu))
            );
        }
        assert_eq!(phi_coefficient(&rat(1, 2), 2).unwrap(), rat(4, 15));
        assert_eq!(phi_coefficient(&rat(7, 5), 0).unwrap(), int(1));
    }

    #[test]
    fn enclosure_of_e() {
        let eps = rat(1, 100_000_000);
        let (re, im) = phi_enclosure(&int(0), &real(int(1)), &eps).unwrap();
        assert!(re.width() <= eps && im.width() <= eps);
        let (lo, hi) = brute_force(&int(0), &int(1), 60);
        assert!(re.lo() <= &hi && re.hi() >= &lo);
        assert!(im.contains(&int(0)));
    }

    #[test]
    fn enclosure_at_zero_is_one() {
        let (re, im) = phi_enclosure(&rat(3, 7), &real(int(0)), &rat(1, 10)).unwrap();
        assert_eq!(re, RatInterval::one());
        assert_eq!(im, RatInterval::zero());
    }

    #[test]
    fn enclosure_half_at_one() {
        let eps = rat(1, 1_000_000);
        let (re, _) = phi_enclosure(&rat(1, 2), &real(int(1)), &eps).unwrap();
        let (lo, hi) = brute_force(&rat(1, 2), &int(1), 60);
        assert!(re.lo() <= &hi && re.hi() >= &lo);
        // 1F1(1; 3/2; 1) = sqrt(pi) e erf(1) / 2 = 2.0300784692787...
        assert!(re.lo() > &rat(20300, 10000) && re.hi() < &rat(20301, 10000));
    }

    #[test]
    fn gaussian_argument_matches_real_and_imaginary_series() {
        let alpha = AlgebraicRatio::new(parse_quadratic_int("i", 1).unwrap(), parse_quadratic_int("1", 1).unwrap())
            .unwrap();
        let eps = rat(1, 1 << 40);
        let (re, im) = phi_enclosure(&rat(1, 3), &alpha, &eps).unwrap();
        // i^nu cycles 1, i, -1, -i
        let mut sr = Rational::zero();
        let mut si = Rational::zero();
        for nu in 0..60usize {
            let c = phi_coefficient(&rat(1, 3), nu).unwrap();
            match nu % 4 {
                0 => sr += c,
                1 => si += c,
                2 => sr -= c,
                _ => si -= c,
            }
        }
        let slack = rat(1, 1 << 39);
        assert!(re.lo() - &slack <= sr && sr <= re.hi() + &slack);
        assert!(im.lo() - &slack <= si && si <= im.hi() + &slack);
    }

    #[test]
    fn refinement_is_nested() {
        let alpha = AlgebraicRatio::parse("(1+w)/2", 3).unwrap();
        let mut prev = phi_enclosure(&rat(-1, 3), &alpha, &rat(1, 10)).unwrap();
        for k in 2..30 {
            let eps = Rational::new(BigInt::one(), BigInt::from(10).pow(k));
            let next = phi_enclosure(&rat(-1, 3), &alpha, &eps).unwrap();
            assert!(prev.0.contains_interval(&next.0), "real part not nested at 10^-{k}");
            assert!(prev.1.contains_interval(&next.1), "imaginary part not nested at 10^-{k}");
            prev = next;
        }
    }

    #[test]
    fn parameters_below_minus_one() {
        let eps = rat(1, 1 << 30);
        let (re, _) = phi_enclosure(&rat(-7, 2), &real(rat(3, 2)), &eps).unwrap();
        let (lo, hi) = brute_force(&rat(-7, 2), &rat(3, 2), 80);
        assert!(re.lo() <= &hi && re.hi() >= &lo);
    }

    proptest! {
        #[test]
        fn tail_majorant_holds(r in -40i64..40, s in 1i64..=6, nu in 0usize..=500) {
            let lambda = rat(r, s);
            prop_assume!(!(is_integer(&lambda) && lambda.is_negative()));
            let c = phi_coefficient(&lambda, nu).unwrap().abs();
            let bound = num_traits::pow(tail_ratio(&lambda), nu)
                / Rational::from_integer(factorial(nu));
            prop_assert!(c <= bound);
        }
    }
}
