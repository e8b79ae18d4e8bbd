//! Machine checks of the arithmetic and analytic properties of a
//! [`PadeSystem`]: the determinant identity, common denominators,
//! coefficient sizes and remainder sizes.
//!
//! Every analytic comparison is `bound >= value` written as a [`LogExpr`]
//! and decided exactly or by enclosures that can only err toward
//! `undecided`.

pub mod constants;
pub mod denominators;
pub mod omega;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::kernel::elementary::sqrt_point;
use crate::kernel::fixed::FixedInterval;
use crate::kernel::logexpr::{decide_nonneg, LogExpr, Status};
use crate::kernel::primes::Factored;
use crate::kernel::quadratic::{AlgebraicRatio, QuadElem, QuadraticInt};
use crate::kernel::rational::{bracket_factorial, factorial, Rational};
use crate::kernel::RatInterval;
use crate::pade::{p_coefficients, PadeSystem};
pub use constants::{
    compute_constants, compute_d_constants, BoundConstants, ConstantsReport, DConstants, SizeForms,
};
pub use denominators::{global_denominator, Denominators};
pub use omega::{omega_constant, omega_determinant, verify_omega, OmegaReport};

/// One verdict of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// The inequality or membership being checked, as a formula.
    pub reference: String,
    pub status: Status,
    pub witness: BTreeMap<String, String>,
}

impl Check {
    fn new(name: impl Into<String>, reference: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            reference: reference.into(),
            status: Status::Pass,
            witness: BTreeMap::new(),
        }
    }

    fn witness(mut self, key: &str, value: impl ToString) -> Self {
        self.witness.insert(key.into(), value.to_string());
        self
    }
}

/// Accumulates many index-wise verdicts into one [`Check`].
struct Family {
    check: Check,
    checked: usize,
    failures: Vec<String>,
    undecided: Vec<String>,
}

impl Family {
    fn new(name: &str, reference: &str) -> Self {
        Self {
            check: Check::new(name, reference),
            checked: 0,
            failures: Vec::new(),
            undecided: Vec::new(),
        }
    }

    fn record(&mut self, index: String, status: Status) {
        self.checked += 1;
        match status {
            Status::Pass => {}
            Status::Fail => self.failures.push(index),
            Status::Undecided => self.undecided.push(index),
        }
    }

    fn finish(self) -> Check {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else if !self.undecided.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        };
        let mut check = self.check.witness("checked", self.checked);
        if !self.failures.is_empty() {
            check = check.witness("failures", self.failures.join(" "));
        }
        if !self.undecided.is_empty() {
            check = check.witness("undecided", self.undecided.join(" "));
        }
        check.status = status;
        check
    }
}

/// Decides `expr >= 0`, trying the exact test before any enclosure.
fn decide(expr: &LogExpr, cap: &Rational) -> Status {
    match expr.exact_sign() {
        Some(Ordering::Less) => Status::Fail,
        Some(_) => Status::Pass,
        None => decide_nonneg(expr, cap).status,
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn fact(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `ln |x|` for a nonzero rational, `None` for zero.
fn ln_abs(x: &Rational) -> Option<LogExpr> {
    (!x.is_zero()).then(|| LogExpr::ln(&x.abs()))
}

fn ln_sqrt(x_sq: &Rational) -> Option<LogExpr> {
    (!x_sq.is_zero()).then(|| LogExpr::ln_scaled(x_sq, &Rational::new(BigInt::one(), BigInt::from(2))))
}

/// Exact membership checks for every coefficient and for the scaled values
/// at `alpha`, plus divisibility between the denominators.
pub fn verify_integrality(system: &PadeSystem, dens: &Denominators) -> Vec<Check> {
    let n = system.degrees().total();
    let m = system.m();
    let d1 = Rational::from_integer(dens.d1.value().clone());
    let d1s = Rational::from_integer(dens.d1_star.value().clone());
    let d2 = Rational::from_integer(dens.d2.value().clone()) * fact(n + 1);
    let d2s = Rational::from_integer(dens.d2_star.value().clone()) * fact(n + 1);

    let mut q_rows = Family::new("integrality_q", "k! D1 a_ik in Z for i >= 1");
    let mut q0 = Family::new("integrality_q0", "k! D1* a_0k in Z");
    let mut p_rows = Family::new("integrality_p", "(N+1)! D2 c_ijmu in Z for i >= 1");
    let mut p0 = Family::new("integrality_p0", "(N+1)! D2* c_0jmu in Z");
    for i in 0..=m {
        let (qf, scale) = if i == 0 { (&mut q0, &d1s) } else { (&mut q_rows, &d1) };
        for (k, a) in system.q(i).coeffs().iter().enumerate() {
            let ok = (fact(k) * scale * a).is_integer();
            qf.record(format!("({i},{k})"), if ok { Status::Pass } else { Status::Fail });
        }
        let (pf, scale) = if i == 0 { (&mut p0, &d2s) } else { (&mut p_rows, &d2) };
        for j in 1..=m {
            for (mu, c) in system.p(i, j).coeffs().iter().enumerate() {
                let ok = (scale * c).is_integer();
                pf.record(format!("({i},{j},{mu})"), if ok { Status::Pass } else { Status::Fail });
            }
        }
    }
    let mut out = vec![q_rows.finish(), q0.finish(), p_rows.finish(), p0.finish()];
    for (what, ok) in dens.divisibilities() {
        let mut c = Check::new(format!("divides {what}"), what);
        c.status = if ok { Status::Pass } else { Status::Fail };
        out.push(c);
    }
    out
}

/// `(N+1)! D(N) Q_i(alpha)` and `(N+1)! D(N) P_ij(alpha)` lie in `Z_K`.
pub fn verify_scaled_integrality(
    system: &PadeSystem,
    alpha: &AlgebraicRatio,
    dn: &QuadraticInt,
) -> Vec<Check> {
    let n = system.degrees().total();
    let a = alpha.value();
    let scale = dn.to_elem().scale(&fact(n + 1));
    let mut qf = Family::new("integrality_q_alpha", "(N+1)! D(N) Q_i(alpha) in Z_K");
    let mut pf = Family::new("integrality_p_alpha", "(N+1)! D(N) P_ij(alpha) in Z_K");
    let status = |v: QuadElem| if v.is_integral() { Status::Pass } else { Status::Fail };
    for i in 0..=system.m() {
        qf.record(format!("({i})"), status(system.q(i).eval_quad(&a).mul(&scale)));
        for j in 1..=system.m() {
            pf.record(format!("({i},{j})"), status(system.p(i, j).eval_quad(&a).mul(&scale)));
        }
    }
    vec![qf.finish(), pf.finish()]
}

/// `D <= E` for the four denominators.
pub fn verify_denominator_sizes(system: &PadeSystem, dens: &Denominators, cap: &Rational) -> Vec<Check> {
    let cfg = system.config();
    let n = system.degrees().total();
    let pairs: [(&str, &str, &Factored, LogExpr); 4] = [
        ("size_D1", "D1 <= S^{2(N+m)} e^{6(Rhat m + Shat N)}", &dens.d1, SizeForms::ln_e1(cfg, n)),
        ("size_D2", "D2 <= S^{2(N+m)} e^{6(R + S + Rhat m + (Shat+S) N)}", &dens.d2, SizeForms::ln_e2(cfg, n)),
        (
            "size_D1star",
            "D1* <= S^{2(m+1)N} e^{6(m(Rhat + Shat N) + R + 2SN)}",
            &dens.d1_star,
            SizeForms::ln_e1_star(cfg, n),
        ),
        (
            "size_D2star",
            "D2* <= S^{2(m+1)N} e^{6(m(Rhat + Shat N) + 2R + 3SN)}",
            &dens.d2_star,
            SizeForms::ln_e2_star(cfg, n),
        ),
    ];
    pairs
        .into_iter()
        .map(|(name, reference, d, ln_bound)| {
            let expr = ln_bound.minus(&LogExpr::ln(&Rational::from_integer(d.value().clone())));
            let mut c = Check::new(name, reference)
                .witness("value", d.value())
                .witness("ln_bound", short(&ln_bound.enclose(48)));
            c.status = decide(&expr, cap);
            c
        })
        .collect()
}

/// `|k! a_ik| <= 2^k F1` for `i >= 1` and `|k! a_0k| <= 2^k F1*`.
pub fn verify_coefficient_sizes(system: &PadeSystem, cap: &Rational) -> Vec<Check> {
    let cfg = system.config();
    let n = system.degrees().total();
    let f1 = SizeForms::ln_f1(cfg, n);
    let f1s = SizeForms::ln_f1_star(cfg, n);
    let mut rows = Family::new("size_coefficients", "|k! a_ik| <= 2^k S^{3N} e^{6(Rm + S + S(m+1)N)}");
    let mut row0 = Family::new("size_coefficients0", "|k! a_0k| <= 2^k (8 S^3)^N e^{6(R(m+1) + S(m+3)N)}");
    for i in 0..=system.m() {
        let (fam, f) = if i == 0 { (&mut row0, &f1s) } else { (&mut rows, &f1) };
        for (k, a) in system.q(i).coeffs().iter().enumerate() {
            let status = match ln_abs(&(fact(k) * a)) {
                None => Status::Pass,
                Some(ln_v) => {
                    let bound = f.plus(&LogExpr::ln_scaled(&int(2), &int(k)));
                    decide(&bound.minus(&ln_v), cap)
                }
            };
            fam.record(format!("({i},{k})"), status);
        }
    }
    vec![rows.finish(), row0.finish()]
}

/// `|Q_i(alpha)| <= F e^{2|alpha|}`, `|Q_i(alpha)| <= e^{c1 + c2 N}` and
/// `|D(N)| <= e^{c3 + c4 N}`.
pub fn verify_value_sizes(
    system: &PadeSystem,
    alpha: &AlgebraicRatio,
    dn: &QuadraticInt,
    constants: &BoundConstants,
    cap: &Rational,
) -> Vec<Check> {
    let cfg = system.config();
    let n = system.degrees().total();
    let a = alpha.value();
    let two_abs_alpha = LogExpr::sqrt_scaled(&alpha.abs_squared(), &int(2));
    let ln_q_limit = constants.c1.plus(&constants.c2.scale(&int(n)));
    let mut series = Family::new("size_q_alpha_series", "|Q_i(alpha)| <= F e^{2|alpha|} with F = F1, or F1* for i = 0");
    let mut q_bound = Family::new("size_q_alpha", "|Q_i(alpha)| <= e^{c1 + c2 N}");
    for i in 0..=system.m() {
        let f = if i == 0 { SizeForms::ln_f1_star(cfg, n) } else { SizeForms::ln_f1(cfg, n) };
        let v = system.q(i).eval_quad(&a).norm();
        let (s1, s2) = match ln_sqrt(&v) {
            None => (Status::Pass, Status::Pass),
            Some(ln_v) => (
                decide(&f.plus(&two_abs_alpha).minus(&ln_v), cap),
                decide(&ln_q_limit.minus(&ln_v), cap),
            ),
        };
        series.record(format!("({i})"), s1);
        q_bound.record(format!("({i})"), s2);
    }
    let dn_sq = dn.abs_squared();
    let bound = constants.c3.plus(&constants.c4.scale(&int(n)));
    let mut dcheck = Check::new("size_DN", "|D(N)| <= e^{c3 + c4 N}")
        .witness("DN", dn)
        .witness("ln_bound", short(&bound.enclose(48)));
    dcheck.status = decide(&bound.minus(&ln_sqrt(&dn_sq).expect("D(N) is nonzero")), cap);
    vec![series.finish(), q_bound.finish(), dcheck]
}

/// Working precision, in bits, of the partial sums of remainders.
const REMAINDER_BITS: u32 = 128;

/// Data bounding `R_ij(alpha)`: enclosures of the real and imaginary parts
/// of a partial sum and a rational `tail >= |R_ij(alpha) - partial|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderEnclosure {
    pub re: RatInterval,
    pub im: RatInterval,
    pub tail: Rational,
    pub terms: usize,
}

impl RemainderEnclosure {
    /// `(|re| + tail)^2 + (|im| + tail)^2 >= |R|^2`.
    pub fn abs_squared_upper(&self) -> Rational {
        let a = self.re.mag() + &self.tail;
        let b = self.im.mag() + &self.tail;
        &a * &a + &b * &b
    }

    /// Real and imaginary enclosures of `R_ij(alpha)`.
    pub fn parts(&self) -> (RatInterval, RatInterval) {
        let t = &self.tail;
        (
            RatInterval::new(self.re.lo() - t, self.re.hi() + t),
            RatInterval::new(self.im.lo() - t, self.im.hi() + t),
        )
    }

    /// True when the tail cannot move the partial sum by more than
    /// `2^-96` relative.
    fn tail_negligible(&self) -> bool {
        let scale = self.re.mag().max(self.im.mag());
        self.tail.is_zero() || self.tail <= scale / Rational::from_integer(BigInt::one() << 96usize)
    }
}

/// Upper bound for `|alpha|` on a fine dyadic grid.
pub fn abs_upper(alpha: &AlgebraicRatio) -> Rational {
    sqrt_point(&alpha.abs_squared(), 40).hi().clone()
}

/// `alpha^start sum_k c_k alpha^k` as real and imaginary enclosures. The
/// sum runs in fixed point with `REMAINDER_BITS` bits below the largest
/// coefficient; the power of `alpha` is exact.
fn horner(c: &[Rational], alpha: &AlgebraicRatio, start: usize) -> (RatInterval, RatInterval) {
    let top = c
        .iter()
        .filter(|q| !q.is_zero())
        .map(|q| q.numer().bits() as i64 - q.denom().bits() as i64)
        .max()
        .unwrap_or(0);
    let w = (REMAINDER_BITS as i64 - top).max(REMAINDER_BITS as i64) as u32;
    let (ar, ai) = alpha.value().parts_at(w + 8);
    let (ar, ai) = (FixedInterval::from_interval(&ar, w), FixedInterval::from_interval(&ai, w));
    let (mut re, mut im) = (FixedInterval::zero(), FixedInterval::zero());
    for cm in c.iter().rev() {
        let next_re = re.mul(&ar, w).sub(&im.mul(&ai, w)).add(&FixedInterval::from_rational(cm, w));
        im = re.mul(&ai, w).add(&im.mul(&ar, w));
        re = next_re;
    }
    let (sr, si) = (re.to_interval(w), im.to_interval(w));
    let (pr, pi) = alpha.value().pow(start).parts_at(REMAINDER_BITS + 8);
    (
        (&(&sr * &pr) - &(&si * &pi)).round_out(REMAINDER_BITS),
        (&(&sr * &pi) + &(&si * &pr)).round_out(REMAINDER_BITS),
    )
}

/// Sums `c_ijmu alpha^mu` for `terms` indices past the truncation point of
/// `P_ij` (exact coefficients, interval evaluation) and bounds the rest
/// geometrically: once `lambda_j + mu_0 - N + 1 > 0`, every further factor
/// of `[mu - k]` has modulus at least `rho^{-1} = lambda_j + mu_0 - N + 1`,
/// so the tail is at most
/// `|alpha|^{mu_0} sum_k |a_k| / |[mu_0 - k]| / (1 - rho |alpha|)`.
pub fn remainder_enclosure(
    system: &PadeSystem,
    i: usize,
    j: usize,
    alpha: &AlgebraicRatio,
    terms: usize,
) -> Result<RemainderEnclosure> {
    let n = system.degrees().total();
    let lambda = system.config().lambda(j);
    let start = system.truncation(i, j) + 1;
    let a_hi = abs_upper(alpha);
    // smallest mu_0 with rho |alpha| <= 1/2
    let need = (int(2) * &a_hi - lambda + int(n)).ceil().to_integer().to_usize().unwrap_or(0);
    let mu0 = (start + terms.max(1)).max(need);
    let c = p_coefficients(system.q(i), lambda, mu0 - 1)?;
    let (re, im) = horner(&c[start..], alpha, start);
    let coeffs = system.q(i).coeffs();
    let lowest = mu0.saturating_sub(coeffs.len().saturating_sub(1));
    let mut bracket = bracket_factorial(lambda, lowest)?.abs();
    let mut sum = Rational::zero();
    for t in lowest..=mu0 {
        if t > lowest {
            bracket *= (lambda + int(t)).abs();
        }
        let ak = &coeffs[mu0 - t];
        if !ak.is_zero() {
            sum += ak.abs() / &bracket;
        }
    }
    let rho = (lambda + int(mu0) - int(n) + Rational::one()).recip();
    let geometric = (Rational::one() - &rho * &a_hi).recip();
    let tail = sum * num_traits::pow(a_hi, mu0) * geometric;
    let tail = RatInterval::point(tail).round_out(REMAINDER_BITS).hi().clone();
    Ok(RemainderEnclosure {
        re,
        im,
        tail,
        terms: mu0 - start,
    })
}

/// `|(N+1)! D(N) R_ij(alpha)| <= e^{c5 + c6 N} N^{-n_j}` for every `i, j`.
pub fn verify_remainder_bounds(
    system: &PadeSystem,
    alpha: &AlgebraicRatio,
    dn: &QuadraticInt,
    constants: &BoundConstants,
    cap: &Rational,
) -> Result<Vec<Check>> {
    let n = system.degrees().total();
    let scale = LogExpr::ln(&fact(n + 1)).plus(&ln_sqrt(&dn.abs_squared()).expect("D(N) is nonzero"));
    let bounds: Vec<(LogExpr, String)> = (1..=system.m())
        .map(|j| {
            let bound = constants
                .c5
                .plus(&constants.c6.scale(&int(n)))
                .minus(&LogExpr::ln_scaled(&int(n), &int(system.degrees().n(j))));
            let shown = short(&bound.enclose(48));
            (bound.minus(&scale), shown)
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..=system.m() {
        for (j, (margin, shown)) in (1..=system.m()).zip(&bounds) {
            let mut terms = 2 * (n + 1);
            let mut attempt = 0;
            let (status, enclosure) = loop {
                let enc = remainder_enclosure(system, i, j, alpha, terms)?;
                let upper = enc.abs_squared_upper();
                let status = match ln_sqrt(&upper) {
                    None => Status::Pass,
                    Some(ln_r) => decide(&margin.minus(&ln_r), cap),
                };
                if status == Status::Pass || enc.tail_negligible() || attempt == 4 {
                    break (status, enc);
                }
                terms *= 2;
                attempt += 1;
            };
            let (re, im) = enclosure.parts();
            let mut c = Check::new(
                format!("remainder_{i}_{j}"),
                "|(N+1)! D(N) R_ij(alpha)| <= e^{c5 + c6 N} N^{-n_j}",
            )
            .witness("R_re", short(&re))
            .witness("R_im", short(&im))
            .witness("terms", enclosure.terms)
            .witness("ln_bound", shown);
            c.status = status;
            out.push(c);
        }
    }
    Ok(out)
}

/// Compact decimal rendering of an interval for witnesses.
pub fn short(x: &RatInterval) -> String {
    format!("[{}, {}]", sci(x.lo()), sci(x.hi()))
}

fn sci(q: &Rational) -> String {
    match q.to_f64() {
        Some(v) if v.is_finite() => format!("{v:.12e}"),
        _ => {
            let digits = q.abs().to_integer().to_string().len();
            format!("{}~1e{}", if q.is_negative() { "-" } else { "" }, digits - 1)
        }
    }
}

/// The parts of a certificate that do not depend on `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureCertificate {
    pub omega: Option<OmegaReport>,
    pub denominators: DenominatorReport,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenominatorReport {
    #[serde(rename = "D1")]
    pub d1: Factored,
    #[serde(rename = "D2")]
    pub d2: Factored,
    #[serde(rename = "D1star")]
    pub d1_star: Factored,
    #[serde(rename = "D2star")]
    pub d2_star: Factored,
    #[serde(rename = "ln_E1")]
    pub ln_e1: RatInterval,
    #[serde(rename = "ln_E2")]
    pub ln_e2: RatInterval,
    #[serde(rename = "ln_E1star")]
    pub ln_e1_star: RatInterval,
    #[serde(rename = "ln_E2star")]
    pub ln_e2_star: RatInterval,
}

/// Determinant identity, denominators, integrality and coefficient sizes.
pub fn certify_structure(system: &PadeSystem, cap: &Rational) -> Result<(StructureCertificate, Denominators)> {
    let cfg = system.config();
    let n = system.degrees().total();
    let mut checks = Vec::new();
    let omega = match verify_omega(system) {
        Ok(report) => {
            checks.push(
                Check::new("omega", "det(Q_i, P_i1, ..., P_im) = c z^{(m+1)N+m}")
                    .witness("constant", &report.expected_constant),
            );
            Some(report)
        }
        Err(e) => {
            let mut c = Check::new("omega", "det(Q_i, P_i1, ..., P_im) = c z^{(m+1)N+m}").witness("error", e);
            c.status = Status::Fail;
            checks.push(c);
            None
        }
    };
    let dens = Denominators::new(cfg, system.degrees())?;
    checks.extend(verify_integrality(system, &dens));
    checks.extend(verify_denominator_sizes(system, &dens, cap));
    checks.extend(verify_coefficient_sizes(system, cap));
    let enc = |x: LogExpr| x.enclose(64).round_out(64);
    let denominators = DenominatorReport {
        d1: dens.d1.clone(),
        d2: dens.d2.clone(),
        d1_star: dens.d1_star.clone(),
        d2_star: dens.d2_star.clone(),
        ln_e1: enc(SizeForms::ln_e1(cfg, n)),
        ln_e2: enc(SizeForms::ln_e2(cfg, n)),
        ln_e1_star: enc(SizeForms::ln_e1_star(cfg, n)),
        ln_e2_star: enc(SizeForms::ln_e2_star(cfg, n)),
    };
    Ok((
        StructureCertificate {
            omega,
            denominators,
            checks,
        },
        dens,
    ))
}

/// Global denominator, scaled integrality and the size bounds at `alpha`.
pub fn certify_at(
    system: &PadeSystem,
    dens: &Denominators,
    alpha: &AlgebraicRatio,
    cap: &Rational,
) -> Result<(Vec<Check>, QuadraticInt, BoundConstants)> {
    let n = system.degrees().total();
    let dn = denominators::global_from(&dens.d2_star, n, alpha);
    let constants = compute_constants(system.config(), alpha, system.m());
    let mut checks = verify_scaled_integrality(system, alpha, &dn);
    checks.extend(verify_value_sizes(system, alpha, &dn, &constants, cap));
    checks.extend(verify_remainder_bounds(system, alpha, &dn, &constants, cap)?);
    Ok((checks, dn, constants))
}

/// The full certificate for one system and one `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub system: PadeSystem,
    pub alpha: AlgebraicRatio,
    pub structure: StructureCertificate,
    pub dn: QuadraticInt,
    pub constants: ConstantsReport,
    pub checks: Vec<Check>,
    pub status: Status,
}

pub fn certify_system(system: &PadeSystem, alpha: &AlgebraicRatio, cap: &Rational) -> Result<Certificate> {
    if alpha.is_zero() {
        return Err(crate::error::PadeError::Domain("alpha must be nonzero".into()));
    }
    let (structure, dens) = certify_structure(system, cap)?;
    let (at_alpha, dn, constants) = certify_at(system, &dens, alpha, cap)?;
    let mut checks = structure.checks.clone();
    checks.extend(at_alpha);
    let status = checks.iter().fold(Status::Pass, |acc, c| acc.combine(c.status));
    let eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let mut report = constants.report(&eps);
    round_report(&mut report);
    Ok(Certificate {
        system: system.clone(),
        alpha: alpha.clone(),
        structure,
        dn,
        constants: report,
        checks,
        status,
    })
}

fn round_report(r: &mut ConstantsReport) {
    for x in [
        &mut r.c1, &mut r.c2, &mut r.c3, &mut r.c4, &mut r.c5, &mut r.c6, &mut r.b1_hat, &mut r.b1,
        &mut r.b3, &mut r.e1_hat, &mut r.e1, &mut r.e3, &mut r.n2,
    ] {
        *x = x.round_out(64);
    }
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Certificate", 11)?;
        st.serialize_field("schema", &1)?;
        st.serialize_field(
            "lambdas",
            &self.system.config().lambdas().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        )?;
        st.serialize_field("n", self.system.degrees().as_slice())?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("field", &self.alpha.d())?;
        st.serialize_field("omega", &self.structure.omega)?;
        st.serialize_field("denominators", &self.structure.denominators)?;
        st.serialize_field("DN", &self.dn.to_string())?;
        st.serialize_field("constants", &self.constants)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("status", &self.status)?;
        st.end()
    }
}
