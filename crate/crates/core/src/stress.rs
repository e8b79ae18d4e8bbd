//! Seeded random linear forms compared against the theorem's bound.
//!
//! Heights reachable here are far below the range where the theorem
//! applies, so results are observations. A violation is a form whose
//! `|Lambda|` is certainly below the bound; it is recorded, never hidden.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baker::{
    comparison_height, compare_with_bound, ln_abs_enclosure, theorem_bound_from, Admissible, LinearForm, Pipeline,
    BOUND_BITS,
};
use crate::efunction::{phi_enclosure, LambdaConfig};
use crate::error::Result;
use crate::kernel::elementary::{e_at, exp_at, ln_at};
use crate::kernel::logexpr::Status;
use crate::kernel::quadratic::{has_half_basis, AlgebraicRatio, QuadraticInt};
use crate::kernel::rational::Rational;
use crate::kernel::RatInterval;

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_BOX: u64 = 1000;

/// Width of the cached `phi_j(alpha)` enclosures, as a power of 2.
const PHI_CACHE_BITS: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StressSpec {
    pub trials: usize,
    pub seed: u64,
    /// Every coordinate of every `beta_j` is drawn from `[-box, box]`.
    pub bound_box: u64,
}

impl Default for StressSpec {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            bound_box: DEFAULT_BOX,
        }
    }
}

/// One form whose comparison did not pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incident {
    pub trial: usize,
    pub beta: Vec<String>,
    pub verdict: Status,
    pub ln_abs_lambda: Option<RatInterval>,
    pub ln_bound: RatInterval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StressSummary {
    pub schema: u32,
    pub lambdas: Vec<String>,
    pub alpha: String,
    pub field: u64,
    pub trials: usize,
    pub seed: u64,
    #[serde(rename = "box")]
    pub bound_box: u64,
    /// Forms meeting `2 ln Hhat >= max(2 ln N2, x2 ln x2, e^e)`.
    pub admissible: usize,
    pub admissibility_undecided: usize,
    pub violations: usize,
    pub undecided: usize,
    /// Smallest certified lower end of `ln |Lambda| - ln bound`, i.e. of
    /// `ln(|Lambda| H^{1 + 6D/lnln H})`.
    pub min_margin: Option<String>,
    pub min_margin_trial: Option<usize>,
    /// Forms whose height was raised to the clamped value.
    pub clamped: usize,
    pub incidents: Vec<Incident>,
}

fn random_coefficient(rng: &mut ChaCha8Rng, d: u64, bound: i64) -> QuadraticInt {
    let x = BigInt::from(rng.gen_range(-bound..=bound));
    if d == 0 {
        return QuadraticInt::rational_int(x);
    }
    let y = BigInt::from(rng.gen_range(-bound..=bound));
    QuadraticInt::new(d, x, y, has_half_basis(d)).expect("field already validated")
}

/// Draws a nonzero coefficient vector, rejecting the zero vector.
pub fn random_form(rng: &mut ChaCha8Rng, alpha: &AlgebraicRatio, m: usize, bound: u64) -> LinearForm {
    let bound = i64::try_from(bound).unwrap_or(i64::MAX);
    loop {
        let beta: Vec<QuadraticInt> = (0..=m).map(|_| random_coefficient(rng, alpha.d(), bound)).collect();
        if let Ok(form) = LinearForm::new(beta, alpha.clone()) {
            return form;
        }
    }
}

fn cmul(a: &(RatInterval, RatInterval), b: &(RatInterval, RatInterval)) -> (RatInterval, RatInterval) {
    (
        &(&a.0 * &b.0) - &(&a.1 * &b.1),
        &(&a.0 * &b.1) + &(&a.1 * &b.0),
    )
}

/// Right-hand side of the admissibility condition, computed once.
fn admissibility_threshold(pipeline: &Pipeline) -> Result<RatInterval> {
    let bits = 128;
    let n2 = pipeline.constants.n2.enclose(bits);
    let two_ln_n2 = ln_at(&n2, bits)?.scale(&Rational::from_integer(BigInt::from(2)));
    let x2 = &pipeline.x2;
    let x2_ln_x2 = x2 * &ln_at(x2, bits)?;
    let e_to_e = exp_at(&e_at(bits + 8), bits);
    Ok(two_ln_n2.max(&x2_ln_x2).max(&e_to_e))
}

/// Runs `spec.trials` random forms at one parameter point.
pub fn run_stress(
    config: &LambdaConfig,
    alpha: &AlgebraicRatio,
    spec: &StressSpec,
    cap: &Rational,
) -> Result<StressSummary> {
    let m = config.m();
    let pipeline = Pipeline::new(config, alpha)?;
    let threshold = admissibility_threshold(&pipeline)?;
    let d_sum = pipeline.d.combined(m);
    let width = Rational::new(BigInt::one(), BigInt::one() << PHI_CACHE_BITS);
    let phis = (1..=m)
        .map(|j| phi_enclosure(config.lambda(j), alpha, &width))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut summary = StressSummary {
        schema: 1,
        lambdas: config.lambdas().iter().map(ToString::to_string).collect(),
        alpha: alpha.to_string(),
        field: alpha.d(),
        trials: spec.trials,
        seed: spec.seed,
        bound_box: spec.bound_box,
        admissible: 0,
        admissibility_undecided: 0,
        violations: 0,
        undecided: 0,
        min_margin: None,
        min_margin_trial: None,
        clamped: 0,
        incidents: Vec::new(),
    };
    let mut min_margin: Option<Rational> = None;
    for trial in 0..spec.trials {
        let form = random_form(&mut rng, alpha, m, spec.bound_box);
        let lhs = form.ln_height_hat().enclose(128).scale(&Rational::from_integer(BigInt::from(2)));
        let admissible = if lhs.lo() >= threshold.hi() {
            Admissible::Yes
        } else if lhs.hi() < threshold.lo() {
            Admissible::No
        } else {
            Admissible::Undecided
        };
        match admissible {
            Admissible::Yes => summary.admissible += 1,
            Admissible::Undecided => summary.admissibility_undecided += 1,
            Admissible::No => {}
        }
        let (_, ln_h, clamped) = comparison_height(&form);
        if clamped {
            summary.clamped += 1;
        }
        let ln_bound = theorem_bound_from(&ln_h, &d_sum, BOUND_BITS)?;
        let mut lambda = form.beta()[0].to_elem().parts_at(PHI_CACHE_BITS as u32);
        for (j, phi) in phis.iter().enumerate() {
            let b = form.beta()[j + 1].to_elem().parts_at(PHI_CACHE_BITS as u32 + 16);
            let t = cmul(&b, phi);
            lambda = (&lambda.0 + &t.0, &lambda.1 + &t.1);
        }
        let quick = ln_abs_enclosure(&lambda.0, &lambda.1, 64);
        let (verdict, ln_abs) = match quick {
            Some(l) if l.lo() > ln_bound.hi() => (Status::Pass, Some(l)),
            _ => {
                let c = compare_with_bound(&form, config, &ln_bound, cap)?;
                (c.verdict, c.ln_abs_lambda)
            }
        };
        if let Some(l) = &ln_abs {
            let margin = l.lo() - ln_bound.hi();
            if min_margin.as_ref().is_none_or(|best| &margin < best) {
                min_margin = Some(margin);
                summary.min_margin_trial = Some(trial);
            }
        }
        match verdict {
            Status::Pass => continue,
            Status::Fail => summary.violations += 1,
            Status::Undecided => summary.undecided += 1,
        }
        summary.incidents.push(Incident {
            trial,
            beta: form.beta().iter().map(ToString::to_string).collect(),
            verdict,
            ln_abs_lambda: ln_abs,
            ln_bound,
        });
    }
    summary.min_margin = min_margin.map(|q| {
        let v = num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN);
        if q.is_negative() && v == 0.0 {
            "-0".into()
        } else {
            format!("{v:.6}")
        }
    });
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efunction::validate_config;
    use crate::kernel::rational::{int, rat};

    #[test]
    fn deterministic_and_clean_at_one_point() {
        let cfg = validate_config(&[int(0)]).unwrap();
        let alpha = AlgebraicRatio::parse("1", 0).unwrap();
        let spec = StressSpec {
            trials: 25,
            seed: 7,
            bound_box: 1000,
        };
        let a = run_stress(&cfg, &alpha, &spec, &rat(1, 1_000_000)).unwrap();
        let b = run_stress(&cfg, &alpha, &spec, &rat(1, 1_000_000)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        assert_eq!(a.undecided, 0);
        assert_eq!(a.admissible, 0);
        assert!(a.min_margin.is_some());
    }

    #[test]
    fn forms_are_never_zero() {
        let alpha = AlgebraicRatio::parse("i", 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = random_form(&mut rng, &alpha, 2, 1);
            assert!(f.beta().iter().any(|b| !b.is_zero()));
            assert!(f.beta().iter().all(|b| b.d() == 1));
        }
    }
}
