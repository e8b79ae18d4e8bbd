//! Prime sieving, exact prime-power products and the denominator lemma for
//! `(alpha+1)_n / n!`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::rational::{lcm_all, Rational};
use crate::error::{PadeError, Result};

/// Largest sieve bound accepted; prime products above this are out of scope.
pub const SIEVE_LIMIT: u64 = 50_000_000;

/// Sieve bound together with every prime up to it.
static SIEVE: RwLock<(u64, Vec<u64>)> = RwLock::new((1, Vec::new()));

fn sieve_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes `p <= limit`, from a shared table that only ever grows.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    {
        let table = SIEVE.read().expect("sieve lock");
        if limit <= table.0 {
            let end = table.1.partition_point(|&p| p <= limit);
            return table.1[..end].to_vec();
        }
    }
    let grown = limit.max(1024).next_power_of_two();
    let primes = sieve_to(grown);
    let end = primes.partition_point(|&p| p <= limit);
    let out = primes[..end].to_vec();
    let mut table = SIEVE.write().expect("sieve lock");
    if grown > table.0 {
        *table = (grown, primes);
    }
    out
}

/// Trial-division factorization of a small positive integer.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// A positive integer carried together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    value: BigInt,
    factors: BTreeMap<u64, u32>,
}

impl Factored {
    pub fn one() -> Self {
        Self {
            value: BigInt::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn from_u64(n: u64) -> Self {
        assert!(n > 0, "Factored needs a positive integer");
        Self {
            value: BigInt::from(n),
            factors: factor_u64(n),
        }
    }

    pub fn prime_power(p: u64, e: u32) -> Self {
        let mut factors = BTreeMap::new();
        if e > 0 {
            factors.insert(p, e);
        }
        Self {
            value: num_traits::pow(BigInt::from(p), e as usize),
            factors,
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            *factors.entry(p).or_insert(0) += e;
        }
        Factored {
            value: &self.value * &other.value,
            factors,
        }
    }

    pub fn pow(&self, e: u32) -> Factored {
        Factored {
            value: num_traits::pow(self.value.clone(), e as usize),
            factors: self.factors.iter().map(|(&p, &k)| (p, k * e)).collect(),
        }
    }

    /// Exact divisibility, checked both on exponents and on the values.
    pub fn divides(&self, other: &Factored) -> bool {
        let by_exponent = self
            .factors
            .iter()
            .all(|(p, e)| other.factors.get(p).copied().unwrap_or(0) >= *e);
        by_exponent && other.value.is_multiple_of(&self.value)
    }

    pub fn factorization_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Serialize for Factored {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Factored", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("factorization", &self.factorization_string())?;
        st.end()
    }
}

/// `prod_{p <= x, p not excluded} p^{e_p}` with `e_p = max{e : p^e <= x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerProduct {
    pub bound: Rational,
    pub excluded: BTreeSet<u64>,
    pub product: Factored,
}

impl PrimePowerProduct {
    pub fn value(&self) -> &BigInt {
        self.product.value()
    }
}

/// Largest `e` with `p^e <= x`, by exact integer comparison.
fn max_exponent(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut acc = 1u64;
    while let Some(next) = acc.checked_mul(p) {
        if next > x {
            break;
        }
        acc = next;
        e += 1;
    }
    e
}

pub fn prime_power_product(x: &Rational, excluded: &BTreeSet<u64>) -> Result<PrimePowerProduct> {
    let floor = x.floor().to_integer();
    let top = if floor.is_negative() {
        0
    } else {
        floor
            .to_u64()
            .filter(|&v| v <= SIEVE_LIMIT)
            .ok_or_else(|| PadeError::ParameterTooLarge(format!("prime product bound {x}")))?
    };
    let mut product = Factored::one();
    if top >= 2 {
        let mut value = BigInt::one();
        let mut factors = BTreeMap::new();
        for p in primes_up_to(top) {
            if excluded.contains(&p) {
                continue;
            }
            let e = max_exponent(p, top);
            value *= num_traits::pow(BigInt::from(p), e as usize);
            factors.insert(p, e);
        }
        product = Factored { value, factors };
    }
    Ok(PrimePowerProduct {
        bound: x.clone(),
        excluded: excluded.clone(),
        product,
    })
}

/// Same as [`prime_power_product`] with an integer bound and no exclusions.
pub fn lcm_product(x: u64) -> Factored {
    prime_power_product(&Rational::from_integer(BigInt::from(x)), &BTreeSet::new())
        .expect("bound within sieve range")
        .product
}

/// Outcome of checking `lcm(u_0..u_n) | U_n` and `lcm(v_0..v_n) | V_n` where
/// `u_k / v_k = (alpha+1)_k / k!` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RisingDenominatorCertificate {
    pub alpha: String,
    pub n: usize,
    pub lcm_u: String,
    pub u_bound: String,
    pub lcm_v: String,
    pub v_bound: String,
    pub passes: bool,
}

pub fn verify_rising_factorial_denominators(
    alpha: &Rational,
    n: usize,
) -> Result<RisingDenominatorCertificate> {
    if alpha.is_integer() && alpha.is_negative() {
        return Err(PadeError::ZeroFactor {
            lambda: alpha.to_string(),
            nu: n,
        });
    }
    let r = alpha.numer().abs();
    let s = alpha.denom().clone();
    let s_small = s
        .to_u64()
        .ok_or_else(|| PadeError::ParameterTooLarge(format!("denominator of {alpha}")))?;
    let mut nums = Vec::with_capacity(n + 1);
    let mut dens = Vec::with_capacity(n + 1);
    let mut ratio = Rational::one();
    nums.push(BigInt::one());
    dens.push(BigInt::one());
    for k in 1..=n {
        let k_rat = Rational::from_integer(BigInt::from(k));
        ratio = ratio * (alpha + &k_rat) / k_rat;
        nums.push(ratio.numer().abs());
        dens.push(ratio.denom().clone());
    }
    let lcm_u = lcm_all(&nums);
    let lcm_v = lcm_all(&dens);
    let excluded: BTreeSet<u64> = factor_u64(s_small).into_keys().collect();
    let x = Rational::from_integer(&r + &s * BigInt::from(n));
    let u_bound = prime_power_product(&x, &excluded)?.product.value().clone();
    let v_bound = num_traits::pow(s, 2 * n);
    let passes = u_bound.is_multiple_of(&lcm_u) && v_bound.is_multiple_of(&lcm_v);
    Ok(RisingDenominatorCertificate {
        alpha: alpha.to_string(),
        n,
        lcm_u: lcm_u.to_string(),
        u_bound: u_bound.to_string(),
        lcm_v: lcm_v.to_string(),
        v_bound: v_bound.to_string(),
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, rat};

    fn set(ps: &[u64]) -> BTreeSet<u64> {
        ps.iter().copied().collect()
    }

    #[test]
    fn prime_power_product_examples() {
        let p = prime_power_product(&int(3), &set(&[2])).unwrap();
        assert_eq!(p.value(), &BigInt::from(3));
        let p = prime_power_product(&int(10), &set(&[])).unwrap();
        assert_eq!(p.value(), &BigInt::from(2520));
        assert_eq!(p.product.factorization_string(), "2^3*3^2*5*7");
        let p = prime_power_product(&int(1), &set(&[])).unwrap();
        assert_eq!(p.value(), &BigInt::from(1));
        let p = prime_power_product(&rat(17, 2), &set(&[])).unwrap();
        assert_eq!(p.value(), &BigInt::from(840));
    }

    #[test]
    fn exponent_boundaries_are_exact() {
        // p^e == x exactly must count
        assert_eq!(max_exponent(3, 243), 5);
        assert_eq!(max_exponent(3, 242), 4);
        assert_eq!(max_exponent(2, 1), 0);
    }

    #[test]
    fn sieve_grows_and_shrinks_consistently() {
        let small = primes_up_to(30);
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let big = primes_up_to(5000);
        assert_eq!(big.len(), 669);
        assert_eq!(primes_up_to(30), small);
    }

    #[test]
    fn rising_denominator_examples() {
        let c = verify_rising_factorial_denominators(&rat(1, 2), 1).unwrap();
        assert_eq!((c.lcm_u.as_str(), c.u_bound.as_str()), ("3", "3"));
        assert_eq!((c.lcm_v.as_str(), c.v_bound.as_str()), ("2", "4"));
        assert!(c.passes);
        let c = verify_rising_factorial_denominators(&int(0), 12).unwrap();
        assert_eq!(c.lcm_u, "1");
        assert!(c.passes);
        let c = verify_rising_factorial_denominators(&rat(2, 3), 2).unwrap();
        assert_eq!(c.v_bound, "81");
        assert_eq!(c.lcm_u, "20");
        assert!(c.passes);
        assert!(verify_rising_factorial_denominators(&int(-2), 3).is_err());
    }

    #[test]
    fn factored_divisibility() {
        let a = Factored::from_u64(12);
        let b = Factored::from_u64(18).mul(&Factored::from_u64(2));
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.pow(2).value(), &BigInt::from(144));
    }
}
