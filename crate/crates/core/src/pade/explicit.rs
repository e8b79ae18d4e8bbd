//! Closed-form coefficients of the two constructions.
//!
//! Construction 1 gives `Q_0` with `a_N = -1/N!` and
//!
//! ```text
//! k! a_k = sum_sigma sum_{tau<=k} (-1)^(k-tau) C(k,tau)
//!          prod_{mu<N} (g_sigma - mu)/(1 + mu) * prod_{s != sigma} (tau - g_s)/(g_sigma - g_s)
//! ```
//!
//! over the nodes `g` of [`gamma_sequence_first`]. Construction 2 gives `Q_i`
//! from `k! a_k = sum_{tau<=k} (-1)^(k-tau) C(k,tau) prod_s (tau - g_s)/(g_0 - g_s)`
//! over the nodes of [`gamma_sequence_second`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::DegreeVector;
use crate::efunction::LambdaConfig;
use crate::error::{PadeError, Result};
use crate::kernel::rational::{binomial_row, factorial, Rational};
use crate::pade::poly::Poly;

fn integer(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nodes `N+1+lambda_j, ..., N+n_j+lambda_j`, block by block.
pub fn gamma_sequence_first(config: &LambdaConfig, degrees: &DegreeVector) -> Vec<Rational> {
    let n = degrees.total();
    config
        .lambdas()
        .iter()
        .zip(degrees.as_slice())
        .flat_map(|(lambda, &nj)| (1..=nj).map(move |kappa| integer(n + kappa) + lambda))
        .collect()
}

/// `g_0 = N+1+lambda_i` followed by the first-construction nodes with block
/// `i` shifted up by one. `i` runs over `1..=m`.
pub fn gamma_sequence_second(
    config: &LambdaConfig,
    degrees: &DegreeVector,
    i: usize,
) -> Result<Vec<Rational>> {
    let m = config.m();
    if i == 0 || i > m {
        return Err(PadeError::InvalidDegrees(format!("row {i} outside 1..={m}")));
    }
    let n = degrees.total();
    let mut out = Vec::with_capacity(n + 1);
    out.push(integer(n + 1) + config.lambda(i));
    for (j, (lambda, &nj)) in config.lambdas().iter().zip(degrees.as_slice()).enumerate() {
        let shift = usize::from(j + 1 == i);
        out.extend((1..=nj).map(|kappa| integer(n + kappa + shift) + lambda));
    }
    Ok(out)
}

/// `sum_{tau<=k} (-1)^(k-tau) C(k,tau) w_tau`, divided by `k!`.
fn finite_difference_coefficients(w: &[Rational], count: usize) -> Vec<Rational> {
    (0..count)
        .map(|k| {
            let row = binomial_row(k);
            let mut acc = Rational::zero();
            for (tau, c) in row.iter().enumerate() {
                let term = &w[tau] * Rational::from_integer(c.clone());
                if (k - tau) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc / Rational::from_integer(factorial(k))
        })
        .collect()
}

/// Coefficients `a_0, ..., a_N` of `Q_0`.
pub fn q0_coefficients(config: &LambdaConfig, degrees: &DegreeVector) -> Vec<Rational> {
    let gammas = gamma_sequence_first(config, degrees);
    let n = gammas.len();
    // w_sigma = prod_{mu<N} (g_sigma - mu)/(1+mu)
    let weights: Vec<Rational> = gammas
        .iter()
        .map(|g| {
            (0..n).fold(Rational::one(), |acc, mu| {
                acc * (g - integer(mu)) / integer(mu + 1)
            })
        })
        .collect();
    // W_tau = sum_sigma w_sigma prod_{s != sigma} (tau - g_s)/(g_sigma - g_s)
    let sums: Vec<Rational> = (0..n)
        .map(|tau| {
            let t = integer(tau);
            gammas
                .iter()
                .enumerate()
                .map(|(sigma, g_sigma)| {
                    let lagrange = gammas
                        .iter()
                        .enumerate()
                        .filter(|&(s, _)| s != sigma)
                        .fold(Rational::one(), |acc, (_, g_s)| {
                            acc * (&t - g_s) / (g_sigma - g_s)
                        });
                    &weights[sigma] * lagrange
                })
                .sum()
        })
        .collect();
    let mut coeffs = finite_difference_coefficients(&sums, n);
    coeffs.push(-Rational::new(BigInt::one(), factorial(n)));
    coeffs
}

/// Coefficients `a_0, ..., a_N` of `Q_i`, `i` in `1..=m`.
pub fn qi_coefficients(
    config: &LambdaConfig,
    degrees: &DegreeVector,
    i: usize,
) -> Result<Vec<Rational>> {
    let gammas = gamma_sequence_second(config, degrees, i)?;
    let (g0, rest) = gammas.split_first().expect("at least one node");
    let n = rest.len();
    let products: Vec<Rational> = (0..=n)
        .map(|tau| {
            let t = integer(tau);
            rest.iter()
                .fold(Rational::one(), |acc, g| acc * (&t - g) / (g0 - g))
        })
        .collect();
    Ok(finite_difference_coefficients(&products, n + 1))
}

/// `c_mu = sum_{k <= min(mu, deg Q)} a_k / [mu - k]` for `mu = 0..=up_to`,
/// the coefficients of `Q(z) phi_lambda(z)`.
///
/// With `lambda = r/s`, `a_k = A_k / D` and `B_mu = prod_{nu<=mu} (r + s nu)`
/// everything is integral until the last step:
/// `c_mu = s^mu sum_k A_k s^{K-k} prod_{nu=mu-k+1}^{mu} (r + s nu) / (D s^K B_mu)`.
pub fn p_coefficients(q: &Poly, lambda: &Rational, up_to: usize) -> Result<Vec<Rational>> {
    let (r, s) = (lambda.numer().clone(), lambda.denom().clone());
    let factor = |nu: usize| &r + &s * BigInt::from(nu);
    for nu in 1..=up_to {
        if factor(nu).is_zero() {
            return Err(PadeError::ZeroFactor {
                lambda: lambda.to_string(),
                nu,
            });
        }
    }
    let a = q.coeffs();
    let d = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let big_k = a.len().saturating_sub(1);
    let s_pow: Vec<BigInt> = (0..=big_k.max(1)).scan(BigInt::one(), |acc, _| {
        let out = acc.clone();
        *acc *= &s;
        Some(out)
    }).collect();
    // A_k s^{K-k}
    let scaled: Vec<BigInt> = a
        .iter()
        .enumerate()
        .map(|(k, c)| c.numer() * (&d / c.denom()) * &s_pow[big_k - k])
        .collect();
    let base = &d * &s_pow[big_k];
    let mut b = BigInt::one();
    let mut s_mu = BigInt::one();
    let mut out = Vec::with_capacity(up_to + 1);
    for mu in 0..=up_to {
        if mu > 0 {
            b *= factor(mu);
            s_mu *= &s;
        }
        let mut num = BigInt::zero();
        let mut prod = BigInt::one();
        for (k, ak) in scaled.iter().enumerate().take(mu + 1) {
            if k > 0 {
                prod *= factor(mu + 1 - k);
            }
            if !ak.is_zero() {
                num += ak * &prod;
            }
        }
        out.push(Rational::new(num * &s_mu, &base * &b));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efunction::validate_config;
    use crate::kernel::rational::{int, rat};

    fn setup(lambdas: &[Rational], n: &[usize]) -> (LambdaConfig, DegreeVector) {
        let config = validate_config(lambdas).unwrap();
        let degrees = DegreeVector::new(n.to_vec(), config.m()).unwrap();
        (config, degrees)
    }

    #[test]
    fn gamma_examples() {
        let (c, d) = setup(&[int(0)], &[1]);
        assert_eq!(gamma_sequence_first(&c, &d), vec![int(2)]);
        assert_eq!(gamma_sequence_second(&c, &d, 1).unwrap(), vec![int(2), int(3)]);
        let (c, d) = setup(&[int(0), rat(1, 2)], &[1, 1]);
        assert_eq!(gamma_sequence_first(&c, &d), vec![int(3), rat(7, 2)]);
        assert_eq!(
            gamma_sequence_second(&c, &d, 2).unwrap(),
            vec![rat(7, 2), int(3), rat(9, 2)]
        );
        let (c, d) = setup(&[rat(1, 3)], &[2]);
        assert_eq!(gamma_sequence_first(&c, &d), vec![rat(10, 3), rat(13, 3)]);
        assert!(gamma_sequence_second(&c, &d, 2).is_err());
    }

    #[test]
    fn q0_examples() {
        let (c, d) = setup(&[int(0)], &[1]);
        assert_eq!(q0_coefficients(&c, &d), vec![int(2), int(-1)]);
        let (c, d) = setup(&[rat(1, 2)], &[1]);
        assert_eq!(q0_coefficients(&c, &d), vec![rat(5, 2), int(-1)]);
    }

    #[test]
    fn qi_examples() {
        let (c, d) = setup(&[int(0)], &[1]);
        assert_eq!(qi_coefficients(&c, &d, 1).unwrap(), vec![int(3), int(-1)]);
        // a_0 is the single k = 0 term
        let (c, d) = setup(&[rat(1, 3), rat(-1, 2)], &[2, 1]);
        let g = gamma_sequence_second(&c, &d, 2).unwrap();
        let a0 = g[1..].iter().fold(int(1), |acc, s| acc * (-s) / (&g[0] - s));
        assert_eq!(qi_coefficients(&c, &d, 2).unwrap()[0], a0);
    }

    #[test]
    fn p_examples() {
        let q = Poly::new(vec![int(2), int(-1)]);
        assert_eq!(p_coefficients(&q, &int(0), 2).unwrap(), vec![int(2), int(1), int(0)]);
        let q = Poly::new(vec![int(3), int(-1)]);
        assert_eq!(
            p_coefficients(&q, &int(0), 3).unwrap(),
            vec![int(3), int(2), rat(1, 2), int(0)]
        );
        let lambda = rat(2, 5);
        let c = p_coefficients(&Poly::one(), &lambda, 6).unwrap();
        for (mu, cm) in c.iter().enumerate() {
            assert_eq!(cm, &crate::efunction::phi_coefficient(&lambda, mu).unwrap());
        }
    }

    proptest::proptest! {
        #[test]
        fn p_coefficients_match_the_direct_sum(
            coeffs in proptest::collection::vec((-20i64..20, 1i64..9), 1..6),
            (r, sd) in (-7i64..7, 1i64..6),
            up_to in 0usize..12,
        ) {
            let lambda = rat(r, sd);
            let q = Poly::new(coeffs.iter().map(|&(p, d)| rat(p, d)).collect());
            let direct: Option<Vec<Rational>> = (0..=up_to)
                .map(|mu| {
                    (0..q.coeffs().len().min(mu + 1))
                        .map(|k| {
                            crate::kernel::rational::bracket_factorial(&lambda, mu - k)
                                .ok()
                                .map(|b| &q.coeffs()[k] / b)
                        })
                        .sum()
                })
                .collect();
            match direct {
                Some(v) => proptest::prop_assert_eq!(p_coefficients(&q, &lambda, up_to).unwrap(), v),
                None => proptest::prop_assert!(p_coefficients(&q, &lambda, up_to).is_err()),
            }
        }
    }
}
