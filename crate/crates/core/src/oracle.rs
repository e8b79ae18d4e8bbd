//! Brute-force derivation of the approximants by exact linear algebra.
//!
//! The vanishing conditions `c_mu = 0` are linear in the `a_k` once written
//! in the falling-factorial basis `1, g, g(g-1), ...` at the nodes `g`. This
//! module solves those systems directly and checks the cofactor identities
//! behind the closed forms, so it shares no code with [`crate::pade::explicit`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::efunction::LambdaConfig;
use crate::error::{PadeError, Result};
use crate::kernel::rational::{binomial_row, factorial, lcm_all, Rational};
use crate::pade::{gamma_sequence_first, gamma_sequence_second, DegreeVector};

/// Rows `(1, g, g(g-1), ..., g(g-1)...(g-cols+2))` for each node, built one
/// column at a time by `col_{k+1} = col_k * (g - k)`.
pub fn falling_factorial_matrix(gammas: &[Rational], cols: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = gammas.iter().map(|_| Vec::with_capacity(cols)).collect();
    let mut col: Vec<Rational> = vec![Rational::one(); gammas.len()];
    for k in 0..cols {
        for (row, c) in rows.iter_mut().zip(&col) {
            row.push(c.clone());
        }
        let shift = Rational::from_integer(BigInt::from(k));
        for (c, g) in col.iter_mut().zip(gammas) {
            *c *= g - &shift;
        }
    }
    rows
}

/// A square system `matrix * x = rhs` over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        let n = matrix.len();
        if rhs.len() != n {
            return Err(PadeError::Arity {
                expected: n,
                got: rhs.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(PadeError::Arity {
                expected: n,
                got: row.len(),
            });
        }
        Ok(Self { matrix, rhs })
    }

    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    /// Bareiss elimination on the augmented matrix after clearing the
    /// denominators of each row; only the back substitution leaves Z.
    pub fn solve_fraction_free(&self) -> Result<Vec<Rational>> {
        let n = self.size();
        let mut a: Vec<Vec<BigInt>> = self
            .matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let scale = lcm_all(row.iter().chain([b]).map(|q| q.denom()));
                row.iter()
                    .chain([b])
                    .map(|q| q.numer() * (&scale / q.denom()))
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(PadeError::SingularSystem)?;
            a.swap(k, pivot);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(a[i][n].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
            }
            x[i] = acc / Rational::from_integer(a[i][i].clone());
        }
        Ok(x)
    }

    /// Classical Gauss-Jordan elimination over Q.
    pub fn solve_gaussian(&self) -> Result<Vec<Rational>> {
        let n = self.size();
        let mut a: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().chain([b]).cloned().collect())
            .collect();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(PadeError::SingularSystem)?;
            a.swap(k, pivot);
            let inv = a[k][k].recip();
            for v in a[k].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let f = row[k].clone();
                for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                    *x -= &f * p;
                }
            }
        }
        Ok(a.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
    }
}

/// Determinant by elimination over Q.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            let (upper, lower) = a.split_at_mut(i);
            for (x, p) in lower[0][k..].iter_mut().zip(&upper[k][k..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// The matrix with row `r` and column `c` deleted.
fn minor_matrix(matrix: &[Vec<Rational>], r: usize, c: usize) -> Vec<Vec<Rational>> {
    matrix
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != c)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// `Q_0` from the homogeneous system with `a_N = -1/N!` moved to the right.
pub fn solve_first_system(config: &LambdaConfig, degrees: &DegreeVector) -> Result<Vec<Rational>> {
    let gammas = gamma_sequence_first(config, degrees);
    let n = gammas.len();
    let a_n = -Rational::new(BigInt::one(), factorial(n));
    let mut full = falling_factorial_matrix(&gammas, n + 1);
    let rhs = full
        .iter_mut()
        .map(|row| -&a_n * row.pop().expect("N+1 columns"))
        .collect();
    let mut a = LinearSystem::new(full, rhs)?.solve_fraction_free()?;
    a.push(a_n);
    Ok(a)
}

/// `Q_i` from the system with value 1 at `g_0` and 0 at the other nodes.
pub fn solve_second_system(
    config: &LambdaConfig,
    degrees: &DegreeVector,
    i: usize,
) -> Result<Vec<Rational>> {
    let gammas = gamma_sequence_second(config, degrees, i)?;
    let n = gammas.len();
    let mut rhs = vec![Rational::zero(); n];
    rhs[0] = Rational::one();
    LinearSystem::new(falling_factorial_matrix(&gammas, n), rhs)?.solve_fraction_free()
}

/// `prod_{i<j} (g_j - g_i)`.
pub fn vandermonde_delta(gammas: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for (j, gj) in gammas.iter().enumerate() {
        for gi in &gammas[..j] {
            acc *= gj - gi;
        }
    }
    acc
}

/// The same quantity as the determinant of the falling-factorial matrix.
pub fn falling_factorial_determinant(gammas: &[Rational]) -> Rational {
    determinant(&falling_factorial_matrix(gammas, gammas.len()))
}

/// Outcome of checking one cofactor against its closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorVerdict {
    pub sigma: usize,
    pub k: usize,
    /// `k! delta_sigma_k / delta` from the actual minor.
    pub cofactor_side: Rational,
    /// The alternating binomial sum.
    pub closed_form: Rational,
    /// Sample points `z` where the Lagrange form of row `sigma` fails.
    pub lagrange_failures: Vec<usize>,
}

impl CofactorVerdict {
    pub fn holds(&self) -> bool {
        self.cofactor_side == self.closed_form && self.lagrange_failures.is_empty()
    }
}

/// Checks `k! delta_sigma_k / delta = sum_tau (-1)^(k-tau) C(k,tau) prod_{s != sigma} (tau - g_s)/(g_sigma - g_s)`
/// with `delta_sigma_k` the signed minor, and the polynomial identity
/// `sum_k delta_sigma_k z(z-1)...(z-k+1) = delta prod_{s != sigma} (z - g_s)/(g_sigma - g_s)`
/// at `z = 0..N-1`. `sigma` is 1-based, `k` runs over `0..N`.
pub fn verify_cofactor_identity(gammas: &[Rational], sigma: usize, k: usize) -> Result<CofactorVerdict> {
    let n = gammas.len();
    if sigma == 0 || sigma > n || k >= n {
        return Err(PadeError::InvalidDegrees(format!(
            "cofactor ({sigma}, {k}) outside 1..={n} x 0..{n}"
        )));
    }
    let matrix = falling_factorial_matrix(gammas, n);
    let delta = determinant(&matrix);
    if delta.is_zero() {
        return Err(PadeError::SingularSystem);
    }
    let row = sigma - 1;
    let cofactor = |c: usize| {
        let minor = determinant(&minor_matrix(&matrix, row, c));
        if (row + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let g_sigma = &gammas[row];
    let lagrange = |z: &Rational| {
        gammas
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != row)
            .fold(Rational::one(), |acc, (_, g)| acc * (z - g) / (g_sigma - g))
    };
    let cofactor_side =
        Rational::from_integer(factorial(k)) * cofactor(k) / &delta;
    let closed_form = binomial_row(k)
        .into_iter()
        .enumerate()
        .map(|(tau, c)| {
            let term = Rational::from_integer(c) * lagrange(&Rational::from_integer(BigInt::from(tau)));
            if (k - tau).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    let cofactors: Vec<Rational> = (0..n).map(cofactor).collect();
    let points: Vec<Rational> = (0..n).map(|z| Rational::from_integer(BigInt::from(z))).collect();
    let basis = falling_factorial_matrix(&points, n);
    let lagrange_failures = (0..n)
        .filter(|&z| {
            let lhs: Rational = cofactors.iter().zip(&basis[z]).map(|(d, b)| d * b).sum();
            lhs != &delta * lagrange(&points[z])
        })
        .collect();
    Ok(CofactorVerdict {
        sigma,
        k,
        cofactor_side,
        closed_form,
        lagrange_failures,
    })
}

/// Every `(sigma, k)` of [`verify_cofactor_identity`] for one node sequence,
/// ordered by `sigma` then `k`. Each minor is computed once.
pub fn verify_cofactor_identities(gammas: &[Rational]) -> Result<Vec<CofactorVerdict>> {
    let n = gammas.len();
    let matrix = falling_factorial_matrix(gammas, n);
    let delta = determinant(&matrix);
    if delta.is_zero() {
        return Err(PadeError::SingularSystem);
    }
    let rows: Vec<Vec<BigInt>> = (0..n).map(binomial_row).collect();
    let points: Vec<Rational> = (0..n).map(|z| Rational::from_integer(BigInt::from(z))).collect();
    let basis = falling_factorial_matrix(&points, n);
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        let g_sigma = &gammas[row];
        let lagrange: Vec<Rational> = points
            .iter()
            .map(|z| {
                gammas
                    .iter()
                    .enumerate()
                    .filter(|&(s, _)| s != row)
                    .fold(Rational::one(), |acc, (_, g)| acc * (z - g) / (g_sigma - g))
            })
            .collect();
        let cofactors: Vec<Rational> = (0..n)
            .map(|c| {
                let minor = determinant(&minor_matrix(&matrix, row, c));
                if (row + c) % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            })
            .collect();
        let lagrange_failures: Vec<usize> = (0..n)
            .filter(|&z| {
                let lhs: Rational = cofactors.iter().zip(&basis[z]).map(|(d, b)| d * b).sum();
                lhs != &delta * &lagrange[z]
            })
            .collect();
        for (k, cof) in cofactors.iter().enumerate() {
            let closed_form = rows[k]
                .iter()
                .enumerate()
                .map(|(tau, c)| {
                    let term = Rational::from_integer(c.clone()) * &lagrange[tau];
                    if (k - tau) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            out.push(CofactorVerdict {
                sigma: row + 1,
                k,
                cofactor_side: Rational::from_integer(factorial(k)) * cof / &delta,
                closed_form,
                lagrange_failures: lagrange_failures.clone(),
            });
        }
    }
    Ok(out)
}

/// `true` when no two nodes coincide.
pub fn pairwise_distinct(gammas: &[Rational]) -> bool {
    !vandermonde_delta(gammas).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efunction::validate_config;
    use crate::kernel::rational::{int, rat};
    use proptest::prelude::*;

    fn setup(lambdas: &[Rational], n: &[usize]) -> (LambdaConfig, DegreeVector) {
        let config = validate_config(lambdas).unwrap();
        let degrees = DegreeVector::new(n.to_vec(), config.m()).unwrap();
        (config, degrees)
    }

    /// Cofactor expansion along the first row.
    fn laplace(m: &[Vec<Rational>]) -> Rational {
        if m.is_empty() {
            return int(1);
        }
        (0..m.len())
            .map(|c| {
                let t = &m[0][c] * laplace(&minor_matrix(m, 0, c));
                if c % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum()
    }

    #[test]
    fn hand_solves() {
        let (c, d) = setup(&[int(0)], &[1]);
        assert_eq!(solve_first_system(&c, &d).unwrap(), vec![int(2), int(-1)]);
        assert_eq!(solve_second_system(&c, &d, 1).unwrap(), vec![int(3), int(-1)]);
        let (c, d) = setup(&[rat(1, 2)], &[1]);
        assert_eq!(solve_first_system(&c, &d).unwrap(), vec![rat(5, 2), int(-1)]);
    }

    #[test]
    fn homogeneous_gives_zero() {
        let gammas = [int(2), int(3), rat(7, 2)];
        let sys = LinearSystem::new(falling_factorial_matrix(&gammas, 3), vec![int(0); 3]).unwrap();
        assert_eq!(sys.solve_fraction_free().unwrap(), vec![int(0); 3]);
    }

    #[test]
    fn singular_is_reported() {
        let sys = LinearSystem::new(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(1), int(0)])
            .unwrap();
        assert_eq!(sys.solve_fraction_free(), Err(PadeError::SingularSystem));
        assert_eq!(sys.solve_gaussian(), Err(PadeError::SingularSystem));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(vandermonde_delta(&[int(2), int(3)]), int(1));
        assert_eq!(vandermonde_delta(&[int(3), rat(7, 2)]), rat(1, 2));
        assert_eq!(falling_factorial_determinant(&[int(3), rat(7, 2)]), rat(1, 2));
    }

    #[test]
    fn cofactor_examples() {
        let g = [int(3), rat(7, 2), rat(11, 3)];
        let all = verify_cofactor_identities(&g).unwrap();
        for v in &all {
            assert_eq!(v, &verify_cofactor_identity(&g, v.sigma, v.k).unwrap());
        }
        assert_eq!(all.len(), 9);
        let v = verify_cofactor_identity(&[int(2)], 1, 0).unwrap();
        assert!(v.holds());
        assert_eq!(v.cofactor_side, int(1));
        let v = verify_cofactor_identity(&[int(3), rat(7, 2)], 1, 1).unwrap();
        assert!(v.holds(), "{v:?}");
        // delta = 1/2, delta_11 = -1, so 1! * (-1) / (1/2) = -2
        assert_eq!(v.cofactor_side, int(-2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..7).prop_map(|(n, d)| rat(n, d))
    }

    fn distinct(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec(small_rational(), len).prop_filter("distinct", |g| pairwise_distinct(g))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_matches_determinant(g in distinct(1..=8)) {
            prop_assert_eq!(vandermonde_delta(&g), falling_factorial_determinant(&g));
        }

        #[test]
        fn determinant_matches_laplace(g in prop::collection::vec(small_rational(), 1..=5)) {
            let m = falling_factorial_matrix(&g, g.len());
            prop_assert_eq!(determinant(&m), laplace(&m));
        }

        #[test]
        fn eliminations_agree(
            entries in prop::collection::vec(small_rational(), 16),
            rhs in prop::collection::vec(small_rational(), 4),
        ) {
            let matrix: Vec<Vec<Rational>> = entries.chunks(4).map(<[Rational]>::to_vec).collect();
            let sys = LinearSystem::new(matrix, rhs).unwrap();
            let a = sys.solve_fraction_free();
            let b = sys.solve_gaussian();
            prop_assert_eq!(a.is_ok(), !determinant(&sys.matrix).is_zero());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cofactors_random(g in distinct(1..=6)) {
            for sigma in 1..=g.len() {
                for k in 0..g.len() {
                    let v = verify_cofactor_identity(&g, sigma, k).unwrap();
                    prop_assert!(v.holds(), "{:?}", v);
                }
            }
        }
    }
}
