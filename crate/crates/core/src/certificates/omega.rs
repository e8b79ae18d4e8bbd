//! The determinant `Omega(z) = det(Q_i, P_i1, ..., P_im)` over `Q[z]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::efunction::LambdaConfig;
use crate::error::{PadeError, Result};
use crate::kernel::rational::{factorial, rising_factorial, Rational};
use crate::pade::{PadeSystem, Poly};

/// Fraction-free elimination on a square matrix of polynomials; every
/// division is exact by Sylvester's identity, which `div_exact` confirms.
pub fn polynomial_determinant(matrix: &[Vec<Poly>]) -> Poly {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Poly::zero();
        };
        if pivot != k {
            a.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a.last().map(|row| row[n - 1].clone()).unwrap_or_else(Poly::one);
    if negate {
        det.neg()
    } else {
        det
    }
}

pub fn omega_determinant(system: &PadeSystem) -> Poly {
    let matrix: Vec<Vec<Poly>> = system
        .rows()
        .iter()
        .map(|row| std::iter::once(row.q.clone()).chain(row.p.iter().cloned()).collect())
        .collect();
    polynomial_determinant(&matrix)
}

/// `-(1/N!) prod_i prod_{nu=1}^{N+1} (lambda_i + nu)^{-1}`.
pub fn omega_constant(config: &LambdaConfig, n: usize) -> Rational {
    let mut c = -Rational::new(BigInt::one(), factorial(n));
    for lambda in config.lambdas() {
        c /= rising_factorial(&(lambda + Rational::one()), n + 1);
    }
    c
}

/// `(m+1)N + m`.
pub fn omega_degree(m: usize, n: usize) -> usize {
    (m + 1) * n + m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    pub omega: Poly,
    pub expected_degree: usize,
    pub expected_constant: String,
}

/// Computes `Omega` and checks that it equals `c z^{(m+1)N+m}`; the error
/// names the first coefficient where it does not.
pub fn verify_omega(system: &PadeSystem) -> Result<OmegaReport> {
    let n = system.degrees().total();
    let degree = omega_degree(system.m(), n);
    let constant = omega_constant(system.config(), n);
    let omega = omega_determinant(system);
    let len = omega.coeffs().len().max(degree + 1);
    for k in 0..len {
        let expected = if k == degree {
            constant.clone()
        } else {
            Rational::zero()
        };
        if omega.coeff(k) != expected {
            return Err(PadeError::OmegaViolation {
                index: k,
                coefficient: omega.coeff(k).to_string(),
            });
        }
    }
    Ok(OmegaReport {
        omega,
        expected_degree: degree,
        expected_constant: constant.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efunction::validate_config;
    use crate::kernel::rational::{int, rat};
    use crate::pade::{build_system, DegreeVector, Source};

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<Poly>]) -> Poly {
        fn perms(k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for c in 0..k {
                if !used[c] {
                    used[c] = true;
                    cur.push(c);
                    perms(k, used, cur, out);
                    cur.pop();
                    used[c] = false;
                }
            }
        }
        let n = m.len();
        let mut all = Vec::new();
        perms(n, &mut vec![false; n], &mut Vec::new(), &mut all);
        all.iter().fold(Poly::zero(), |acc, p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let term = (0..n).fold(Poly::one(), |t, r| t.mul(&m[r][p[r]]));
            if inversions % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
        })
    }

    fn system(lambdas: &[Rational], n: &[usize]) -> PadeSystem {
        let cfg = validate_config(lambdas).unwrap();
        let deg = DegreeVector::new(n.to_vec(), cfg.m()).unwrap();
        build_system(&cfg, &deg, Source::Explicit).unwrap()
    }

    #[test]
    fn hand_case() {
        let s = system(&[int(0)], &[1]);
        let report = verify_omega(&s).unwrap();
        assert_eq!(report.omega, Poly::monomial(rat(-1, 2), 3));
        assert_eq!(omega_constant(s.config(), 1), rat(-1, 2));
    }

    #[test]
    fn matches_leibniz() {
        for (lambdas, n) in [
            (vec![rat(1, 2), rat(1, 3)], vec![1, 2]),
            (vec![rat(-1, 3), int(0), rat(1, 4)], vec![1, 1, 1]),
        ] {
            let s = system(&lambdas, &n);
            let rows: Vec<Vec<Poly>> = s
                .rows()
                .iter()
                .map(|r| std::iter::once(r.q.clone()).chain(r.p.iter().cloned()).collect())
                .collect();
            assert_eq!(omega_determinant(&s), leibniz(&rows));
            assert!(verify_omega(&s).is_ok());
        }
    }

    #[test]
    fn damaged_system_is_caught() {
        let s = system(&[rat(1, 2)], &[2]);
        let mut value = serde_json::to_value(&s).unwrap();
        value["rows"][0]["Q"][0] = serde_json::json!("7");
        let broken: PadeSystem = serde_json::from_value(value).unwrap();
        assert!(matches!(verify_omega(&broken), Err(PadeError::OmegaViolation { .. })));
    }
}
