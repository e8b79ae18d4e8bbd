//! The approximation system: `Q_0, P_01, ..., P_0m` from the first
//! construction and `Q_i, P_i1, ..., P_im` (`i = 1..m`) from the second.
//! Every `R_ij = Q_i phi_j - P_ij` vanishes at `z = 0` to order at least
//! `N + n_j + 1 + delta_ij`.

pub mod explicit;
pub mod poly;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::efunction::{validate_config, LambdaConfig};
use crate::error::{PadeError, Result};
use crate::kernel::rational::{factorial, parse_rational, rising_factorial, Rational};
use crate::oracle;
pub use explicit::{
    gamma_sequence_first, gamma_sequence_second, p_coefficients, q0_coefficients, qi_coefficients,
};
pub use poly::Poly;

/// Positive block sizes `n_1, ..., n_m` with `N = n_1 + ... + n_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeVector {
    n: Vec<usize>,
}

impl DegreeVector {
    /// `m` is the number of parameters the degrees must match.
    pub fn new(n: Vec<usize>, m: usize) -> Result<Self> {
        if n.len() != m {
            return Err(PadeError::Arity {
                expected: m,
                got: n.len(),
            });
        }
        if let Some(j) = n.iter().position(|&nj| nj == 0) {
            return Err(PadeError::InvalidDegrees(format!("n_{} must be positive", j + 1)));
        }
        Ok(Self { n })
    }

    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let n = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| PadeError::Parse(format!("bad degree {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.n
    }

    /// `n_j` for `j = 1..=m`.
    pub fn n(&self, j: usize) -> usize {
        self.n[j - 1]
    }

    pub fn total(&self) -> usize {
        self.n.iter().sum()
    }
}

/// Where the `Q` coefficients came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Closed-form sums.
    Explicit,
    /// Exact solution of the defining linear systems.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadeRow {
    #[serde(rename = "Q")]
    pub q: Poly,
    #[serde(rename = "P")]
    pub p: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeSystem {
    config: LambdaConfig,
    degrees: DegreeVector,
    rows: Vec<PadeRow>,
    source: Source,
}

/// `delta_ij` with row 0 never on the diagonal.
fn delta(i: usize, j: usize) -> usize {
    usize::from(i != 0 && i == j)
}

impl PadeSystem {
    pub fn config(&self) -> &LambdaConfig {
        &self.config
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }

    pub fn rows(&self) -> &[PadeRow] {
        &self.rows
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn m(&self) -> usize {
        self.config.m()
    }

    /// `Q_i` for `i = 0..=m`.
    pub fn q(&self, i: usize) -> &Poly {
        &self.rows[i].q
    }

    /// `P_ij` for `i = 0..=m`, `j = 1..=m`.
    pub fn p(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i].p[j - 1]
    }

    /// Degree at which `P_ij` is truncated: `N + delta_ij`.
    pub fn truncation(&self, i: usize, j: usize) -> usize {
        self.degrees.total() + delta(i, j)
    }

    /// Range of `mu` on which `c_ijmu` must vanish.
    pub fn vanishing_window(&self, i: usize, j: usize) -> (usize, usize) {
        let d = delta(i, j);
        (self.truncation(i, j) + 1, self.degrees.total() + self.degrees.n(j) + d)
    }

    /// The degree and leading coefficient claims, one message per failure.
    pub fn structural_issues(&self) -> Vec<(usize, String)> {
        let n = self.degrees.total();
        let m = self.m();
        let mut issues = Vec::new();
        if self.rows.len() != m + 1 {
            issues.push((0, format!("expected {} rows, found {}", m + 1, self.rows.len())));
            return issues;
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.p.len() != m {
                issues.push((i, format!("expected {m} P polynomials, found {}", row.p.len())));
                continue;
            }
            if row.q.degree() != Some(n) {
                issues.push((i, format!("deg Q_{i} = {:?}, expected {n}", row.q.degree())));
            }
            for j in 1..=m {
                let p = &row.p[j - 1];
                let bound = self.truncation(i, j);
                match p.degree() {
                    Some(d) if d > bound => {
                        issues.push((i, format!("deg P_{i}{j} = {d} exceeds {bound}")))
                    }
                    None if i == j => issues.push((i, format!("P_{i}{j} is zero"))),
                    _ => {}
                }
            }
        }
        let lead0 = -Rational::new(BigInt::one(), factorial(n));
        if self.rows[0].q.leading() != Some(&lead0) {
            issues.push((0, format!("leading coefficient of Q_0 is not {lead0}")));
        }
        for i in 1..=m {
            let expected = rising_factorial(&(self.config.lambda(i) + Rational::one()), n + 1).recip();
            let p = self.p(i, i);
            if p.degree() != Some(n + 1) || p.leading() != Some(&expected) {
                issues.push((
                    i,
                    format!("P_{i}{i} does not have degree {} with leading coefficient {expected}", n + 1),
                ));
            }
        }
        issues
    }

    /// The first `t` coefficients of `R_ij` past the truncation point of
    /// `P_ij`, i.e. `c_ijmu` for `mu = N+delta_ij+1, ..., N+delta_ij+t`.
    pub fn remainder_coefficients(&self, i: usize, j: usize, t: usize) -> Result<Vec<Rational>> {
        let start = self.truncation(i, j) + 1;
        let c = p_coefficients(self.q(i), self.config.lambda(j), start + t - 1)?;
        Ok(c[start..].to_vec())
    }

    /// Order checks for every `R_ij`: all coefficients of `Q_i phi_j - P_ij`
    /// up to `N + n_j + delta_ij` must vanish.
    pub fn order_checks(&self) -> Result<Vec<OrderCheck>> {
        let mut out = Vec::new();
        for i in 0..=self.m() {
            for j in 1..=self.m() {
                let (lo, hi) = self.vanishing_window(i, j);
                let c = p_coefficients(self.q(i), self.config.lambda(j), hi + 1)?;
                let p = self.p(i, j);
                let r: Vec<Rational> = c.iter().enumerate().map(|(mu, cm)| cm - p.coeff(mu)).collect();
                let nonzero: Vec<usize> = (0..=hi).filter(|&mu| !r[mu].is_zero()).collect();
                let order = r.iter().position(|x| !x.is_zero());
                out.push(OrderCheck {
                    row: i,
                    col: j,
                    window: (lo, hi),
                    required_order: hi + 1,
                    order,
                    offending: nonzero,
                });
            }
        }
        Ok(out)
    }
}

/// Outcome of the vanishing check for one `R_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub row: usize,
    pub col: usize,
    /// `[deg bound of P_ij + 1, N + n_j + delta_ij]`.
    pub window: (usize, usize),
    pub required_order: usize,
    /// Index of the first nonzero coefficient of `R_ij` up to
    /// `required_order`, `None` if all of those vanish.
    pub order: Option<usize>,
    /// Indices `mu <= N + n_j + delta_ij` with a nonzero coefficient.
    pub offending: Vec<usize>,
}

impl OrderCheck {
    pub fn holds(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Builds all `m + 1` rows and checks the degree claims before returning.
pub fn build_system(
    config: &LambdaConfig,
    degrees: &DegreeVector,
    source: Source,
) -> Result<PadeSystem> {
    let m = config.m();
    if degrees.as_slice().len() != m {
        return Err(PadeError::Arity {
            expected: m,
            got: degrees.as_slice().len(),
        });
    }
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let a = match (source, i) {
            (Source::Explicit, 0) => q0_coefficients(config, degrees),
            (Source::Explicit, _) => qi_coefficients(config, degrees, i)?,
            (Source::Oracle, 0) => oracle::solve_first_system(config, degrees)?,
            (Source::Oracle, _) => oracle::solve_second_system(config, degrees, i)?,
        };
        let q = Poly::new(a);
        let mut p = Vec::with_capacity(m);
        for j in 1..=m {
            let trunc = degrees.total() + delta(i, j);
            p.push(Poly::new(p_coefficients(&q, config.lambda(j), trunc)?));
        }
        rows.push(PadeRow { q, p });
    }
    let system = PadeSystem {
        config: config.clone(),
        degrees: degrees.clone(),
        rows,
        source,
    };
    if let Some((row, what)) = system.structural_issues().into_iter().next() {
        return Err(PadeError::InvariantViolation { row, what });
    }
    Ok(system)
}

#[derive(Serialize, Deserialize)]
struct SystemWire {
    schema: u32,
    lambdas: Vec<String>,
    n: Vec<usize>,
    rows: Vec<PadeRow>,
    source: Source,
}

impl Serialize for PadeSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemWire {
            schema: 1,
            lambdas: self.config.lambdas().iter().map(|l| l.to_string()).collect(),
            n: self.degrees.as_slice().to_vec(),
            rows: self.rows.clone(),
            source: self.source,
        }
        .serialize(s)
    }
}

/// Only the shape is checked here; the mathematical claims are left to
/// [`PadeSystem::structural_issues`] and [`PadeSystem::order_checks`] so that
/// a damaged file can still be inspected.
impl<'de> Deserialize<'de> for PadeSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = SystemWire::deserialize(d)?;
        if wire.schema != 1 {
            return Err(D::Error::custom(format!("unsupported schema {}", wire.schema)));
        }
        let lambdas = wire
            .lambdas
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let config = validate_config(&lambdas).map_err(D::Error::custom)?;
        let degrees = DegreeVector::new(wire.n, config.m()).map_err(D::Error::custom)?;
        Ok(PadeSystem {
            config,
            degrees,
            rows: wire.rows,
            source: wire.source,
        })
    }
}
