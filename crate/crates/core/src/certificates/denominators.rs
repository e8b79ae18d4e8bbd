//! Common denominators of the coefficients, built from powers of the `s_j`
//! and products `prod_{p <= x} p^{[log x / log p]}` (the lcm of `1..x`).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::efunction::LambdaConfig;
use crate::error::{PadeError, Result};
use crate::kernel::primes::{prime_power_product, Factored};
use crate::kernel::quadratic::{AlgebraicRatio, QuadElem, QuadraticInt};
use crate::kernel::rational::Rational;
use crate::pade::DegreeVector;

fn lcm_upto(x: BigInt) -> Result<Factored> {
    Ok(prime_power_product(&Rational::from_integer(x), &BTreeSet::new())?.product)
}

fn factored(n: &BigInt) -> Result<Factored> {
    n.to_u64()
        .filter(|&v| v > 0)
        .map(Factored::from_u64)
        .ok_or_else(|| PadeError::ParameterTooLarge(format!("denominator {n}")))
}

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

fn exponent(e: usize) -> Result<u32> {
    u32::try_from(e).map_err(|_| PadeError::ParameterTooLarge(format!("exponent {e}")))
}

/// `D1 = prod_j s_j^{2(n_j+1)} L(Rhat + Shat n_j)` where `L(x)` is the lcm of
/// `1..x`. With one parameter `Rhat = Shat = 0` and `L(0) = 1`.
pub fn denominator_d1(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Factored> {
    let mut acc = Factored::one();
    for (s, &nj) in config.denominators().iter().zip(degrees.as_slice()) {
        acc = acc
            .mul(&factored(s)?.pow(exponent(2 * (nj + 1))?))
            .mul(&lcm_upto(config.r_hat() + config.s_hat() * big(nj))?);
    }
    Ok(acc)
}

/// `D2 = D1 L(R + S(N+1))`.
pub fn denominator_d2(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Factored> {
    let n = degrees.total();
    Ok(denominator_d1(config, degrees)?.mul(&lcm_upto(config.r() + config.s() * big(n + 1))?))
}

/// `D1* = (s_1...s_m)^{2N} prod_j s_j^{2n_j} L(Rhat + Shat N) * L(R + 2NS)`.
pub fn denominator_d1_star(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Factored> {
    let n = degrees.total();
    let mut acc = Factored::one();
    let block = lcm_upto(config.r_hat() + config.s_hat() * big(n))?;
    for (s, &nj) in config.denominators().iter().zip(degrees.as_slice()) {
        acc = acc.mul(&factored(s)?.pow(exponent(2 * n + 2 * nj)?)).mul(&block);
    }
    Ok(acc.mul(&lcm_upto(config.r() + config.s() * big(2 * n))?))
}

/// `D2* = D1* L(R + SN)`.
pub fn denominator_d2_star(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Factored> {
    let n = degrees.total();
    Ok(denominator_d1_star(config, degrees)?.mul(&lcm_upto(config.r() + config.s() * big(n))?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denominators {
    pub d1: Factored,
    pub d2: Factored,
    pub d1_star: Factored,
    pub d2_star: Factored,
}

impl Denominators {
    pub fn new(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Self> {
        Ok(Self {
            d1: denominator_d1(config, degrees)?,
            d2: denominator_d2(config, degrees)?,
            d1_star: denominator_d1_star(config, degrees)?,
            d2_star: denominator_d2_star(config, degrees)?,
        })
    }

    /// The four divisibilities `D1 | D1*`, `D2 | D2*`, `D1 | D2`, `D1* | D2*`.
    pub fn divisibilities(&self) -> [(&'static str, bool); 4] {
        [
            ("D1 | D1*", self.d1.divides(&self.d1_star)),
            ("D2 | D2*", self.d2.divides(&self.d2_star)),
            ("D1 | D2", self.d1.divides(&self.d2)),
            ("D1* | D2*", self.d1_star.divides(&self.d2_star)),
        ]
    }
}

/// `D(N) = b^{N+1} D2*` for `alpha = a/b`: clears the denominators of
/// `(N+1)! Q_i(alpha)` and `(N+1)! P_ij(alpha)` for every row, since all
/// those polynomials have degree at most `N+1`.
pub fn global_denominator(
    config: &LambdaConfig,
    degrees: &DegreeVector,
    alpha: &AlgebraicRatio,
) -> Result<QuadraticInt> {
    let d2_star = denominator_d2_star(config, degrees)?;
    Ok(global_from(&d2_star, degrees.total(), alpha))
}

pub(crate) fn global_from(d2_star: &Factored, n: usize, alpha: &AlgebraicRatio) -> QuadraticInt {
    alpha
        .den
        .to_elem()
        .pow(n + 1)
        .mul(&QuadElem::from_rational(
            alpha.d(),
            Rational::from_integer(d2_star.value().clone()),
        ))
        .to_quadratic_int()
        .expect("product of integers is integral")
}
