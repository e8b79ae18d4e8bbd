//! Acceptance run over the parameter grid. Criteria run one after another
//! (the time limits assume a single core) and each prints one line.
//!
//! Every limit below is a wall-clock budget; a criterion whose checks all
//! hold but that overruns its budget is reported as FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use common::{grid, grid_alphas, grid_configs};
use pade_core::baker::{solve_x2, Admissible, Pipeline};
use pade_core::certificates::{
    certify_at, verify_coefficient_sizes, verify_denominator_sizes, verify_integrality, verify_omega, Denominators,
};
use pade_core::kernel::elementary::ln_at;
use pade_core::kernel::primes::verify_rising_factorial_denominators;
use pade_core::kernel::rational::{int, rat, Rational};
use pade_core::kernel::{precision_cap, RatInterval, Status};
use pade_core::oracle::verify_cofactor_identities;
use pade_core::pade::explicit::{gamma_sequence_first, gamma_sequence_second};
use pade_core::pade::{build_system, DegreeVector, Poly, Source};
use pade_core::stress::{run_stress, StressSpec};
use pade_core::validate_config;

const LIMIT_VANISHING: Duration = Duration::from_secs(60);
const LIMIT_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_OMEGA: Duration = Duration::from_secs(120);
const LIMIT_COFACTOR: Duration = Duration::from_secs(60);
const LIMIT_INTEGRALITY: Duration = Duration::from_secs(60);
const LIMIT_ANALYTIC: Duration = Duration::from_secs(300);
const LIMIT_RISING: Duration = Duration::from_secs(60);
const LIMIT_IDENTITY: Duration = Duration::from_secs(30);
const LIMIT_X2: Duration = Duration::from_secs(5);
const LIMIT_STRESS: Duration = Duration::from_secs(600);

/// Largest `N` for the cofactor identity.
const COFACTOR_MAX_N: usize = 6;
/// Enclosure widths `1e-9`, `1e-18`, `1e-27` for the identity rounds.
const IDENTITY_ROUNDS: u32 = 3;
/// Relative residual allowed at the midpoint returned by `solve_x2`.
const X2_RELATIVE_RESIDUAL: (i64, i64) = (1, 1_000_000_000);
const STRESS_TRIALS: usize = 1000;
const STRESS_SEED: u64 = 7;
const STRESS_BOX: u64 = 1000;

/// Outcome of one criterion: failures found (empty means all held) and a
/// short note on what was covered.
struct Outcome {
    failures: Vec<String>,
    note: String,
}

fn outcome(failures: Vec<String>, note: impl Into<String>) -> Outcome {
    Outcome {
        failures,
        note: note.into(),
    }
}

fn vanishing() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for (cfg, deg) in grid() {
        let system = match build_system(&cfg, &deg, Source::Explicit) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{:?} {:?}: {e}", cfg.lambdas(), deg.as_slice()));
                continue;
            }
        };
        for check in system.order_checks().expect("orders computable") {
            count += 1;
            let hi = check.window.1;
            let ord_ok = check.order.is_none_or(|o| o > hi);
            if !check.holds() || !ord_ok {
                failures.push(format!(
                    "{:?} {:?} R_{}{}: {:?}",
                    cfg.lambdas().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    deg.as_slice(),
                    check.row,
                    check.col,
                    check.offending
                ));
            }
        }
    }
    outcome(failures, format!("{count} remainders"))
}

fn explicit_equals_oracle() -> Outcome {
    let mut failures = Vec::new();
    let pairs = grid();
    for (cfg, deg) in &pairs {
        let a = build_system(cfg, deg, Source::Explicit);
        let b = build_system(cfg, deg, Source::Oracle);
        match (a, b) {
            (Ok(a), Ok(b)) if a.rows() == b.rows() => {}
            _ => failures.push(format!("{:?} {:?}", cfg.lambdas(), deg.as_slice())),
        }
    }
    outcome(failures, format!("{} systems", pairs.len()))
}

fn omega() -> Outcome {
    let mut failures = Vec::new();
    let pairs = grid();
    for (cfg, deg) in &pairs {
        let system = build_system(cfg, deg, Source::Explicit).expect("grid builds");
        if let Err(e) = verify_omega(&system) {
            failures.push(format!("{:?} {:?}: {e}", cfg.lambdas(), deg.as_slice()));
        }
    }
    let cfg = validate_config(&[int(0)]).unwrap();
    let deg = DegreeVector::new(vec![1], 1).unwrap();
    let hand = build_system(&cfg, &deg, Source::Explicit).unwrap();
    let expected = Poly::monomial(rat(-1, 2), 3);
    match verify_omega(&hand) {
        Ok(r) if r.omega == expected => {}
        other => failures.push(format!("hand case: {other:?}")),
    }
    outcome(failures, format!("{} systems and the hand case", pairs.len()))
}

fn cofactor() -> Outcome {
    let mut failures = Vec::new();
    let mut sequences = Vec::new();
    for (cfg, deg) in grid().into_iter().filter(|(_, d)| d.total() <= COFACTOR_MAX_N) {
        sequences.push(gamma_sequence_first(&cfg, &deg));
        for i in 1..=cfg.m() {
            sequences.push(gamma_sequence_second(&cfg, &deg, i).unwrap());
        }
    }
    sequences.sort();
    sequences.dedup();
    let mut identities = 0;
    for g in &sequences {
        match verify_cofactor_identities(g) {
            Ok(all) => {
                identities += all.len();
                for v in all.iter().filter(|v| !v.holds()) {
                    failures.push(format!("{g:?} sigma={} k={}: {v:?}", v.sigma, v.k));
                }
            }
            Err(e) => failures.push(format!("{g:?}: {e}")),
        }
    }
    outcome(failures, format!("{} sequences, {identities} identities", sequences.len()))
}

fn integrality() -> Outcome {
    let mut failures = Vec::new();
    let pairs = grid();
    for (cfg, deg) in &pairs {
        let system = build_system(cfg, deg, Source::Explicit).expect("grid builds");
        let dens = Denominators::new(cfg, deg).expect("denominators");
        for c in verify_integrality(&system, &dens) {
            if c.status != Status::Pass {
                failures.push(format!("{:?} {:?}: {}", cfg.lambdas(), deg.as_slice(), c.name));
            }
        }
        for (name, ok) in dens.divisibilities().into_iter().take(2) {
            if !ok {
                failures.push(format!("{:?} {:?}: {name}", cfg.lambdas(), deg.as_slice()));
            }
        }
    }
    outcome(failures, format!("{} systems", pairs.len()))
}

fn analytic() -> Outcome {
    let cap = precision_cap();
    let mut failures = Vec::new();
    let mut undecided = 0;
    let mut verdicts = 0;
    let alphas = grid_alphas();
    let pairs = grid();
    for (cfg, deg) in &pairs {
        let system = build_system(cfg, deg, Source::Explicit).expect("grid builds");
        let dens = Denominators::new(cfg, deg).expect("denominators");
        let mut checks = verify_denominator_sizes(&system, &dens, &cap);
        checks.extend(verify_coefficient_sizes(&system, &cap));
        for alpha in &alphas {
            let (at, _, _) = certify_at(&system, &dens, alpha, &cap).expect("certificate");
            checks.extend(at);
        }
        for c in checks {
            verdicts += 1;
            match c.status {
                Status::Pass => {}
                Status::Undecided => {
                    undecided += 1;
                    failures.push(format!("{:?} {:?}: {} undecided", cfg.lambdas(), deg.as_slice(), c.name));
                }
                Status::Fail => {
                    failures.push(format!("{:?} {:?}: {} {:?}", cfg.lambdas(), deg.as_slice(), c.name, c.witness))
                }
            }
        }
    }
    outcome(
        failures,
        format!("{} systems x {} points, {verdicts} verdicts, {undecided} undecided", pairs.len(), alphas.len()),
    )
}

fn rising_denominators() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for s in 1..=6i64 {
        for r in -10..=10i64 {
            let a = rat(r, s);
            if a.denom() != &BigInt::from(s) || (s == 1 && r < 0) {
                continue;
            }
            for n in 0..=200 {
                count += 1;
                match verify_rising_factorial_denominators(&a, n) {
                    Ok(c) if c.passes => {}
                    other => failures.push(format!("alpha={a} n={n}: {other:?}")),
                }
            }
        }
    }
    outcome(failures, format!("{count} cases"))
}

fn identity() -> Outcome {
    let mut failures = Vec::new();
    let mut printed_mismatch = 0;
    let mut points = 0;
    for cfg in grid_configs() {
        for alpha in grid_alphas() {
            points += 1;
            let pipeline = Pipeline::new(&cfg, &alpha).expect("pipeline");
            let mut eps = rat(1, 1_000_000_000);
            for round in 0..IDENTITY_ROUNDS {
                let r = pipeline.identity(&eps);
                if !r.overlap || r.lhs.width() > eps || r.rhs.width() > eps {
                    failures.push(format!("{:?} alpha={alpha} round {round}", cfg.lambdas()));
                }
                if round == IDENTITY_ROUNDS - 1 && !r.lhs.overlaps(&r.rhs_with_printed_d1) {
                    printed_mismatch += 1;
                }
                eps *= rat(1, 1_000_000_000);
            }
        }
    }
    outcome(
        failures,
        format!("{points} points; the printed d1 misses the left side at {printed_mismatch} of them"),
    )
}

/// Upper bound on `|x ln x - 2 e1 m (x+m)| / (2 e1 m (x+m))` at `x`.
fn x2_relative_residual(x: &Rational, e1: &Rational, m: usize) -> Rational {
    let mq = Rational::from_integer(BigInt::from(m));
    let rhs = Rational::from_integer(BigInt::from(2)) * e1 * &mq * (x + &mq);
    let ln_x = ln_at(&RatInterval::point(x.clone()), 200).expect("x >= 1");
    let lhs = ln_x.scale(x);
    let diff = lhs.add_rational(&-rhs.clone());
    diff.mag() / rhs
}

fn x2_residual() -> Outcome {
    let mut failures = Vec::new();
    let tol = rat(X2_RELATIVE_RESIDUAL.0, X2_RELATIVE_RESIDUAL.1);
    let mut worst = Rational::zero();
    for e1 in [1, 10, 60] {
        for m in 1..=3 {
            let e = int(e1);
            let x = match solve_x2(&RatInterval::point(e.clone()), m) {
                Ok(x) => x.midpoint(),
                Err(err) => {
                    failures.push(format!("e1={e1} m={m}: {err}"));
                    continue;
                }
            };
            let res = x2_relative_residual(&x, &e, m);
            if res > tol {
                failures.push(format!("e1={e1} m={m}: residual {res}"));
            }
            if res > worst {
                worst = res;
            }
        }
    }
    let worst = num_traits::ToPrimitive::to_f64(&worst).unwrap_or(f64::NAN);
    outcome(failures, format!("9 cases, worst relative residual {worst:.2e}"))
}

fn stress() -> Outcome {
    let cap = precision_cap();
    let mut failures = Vec::new();
    let alpha = pade_core::kernel::AlgebraicRatio::parse("1", 0).unwrap();
    let spec = StressSpec {
        trials: STRESS_TRIALS,
        seed: STRESS_SEED,
        bound_box: STRESS_BOX,
    };
    let configs = grid_configs();
    let mut min_margin: Option<f64> = None;
    for cfg in &configs {
        let pipeline = Pipeline::new(cfg, &alpha).expect("pipeline");
        // Even the largest height the box allows stays below the threshold.
        let m = cfg.m();
        let mut side = BigInt::from(STRESS_BOX);
        side = &side * &side;
        let h2 = num_traits::pow(side, m);
        let h2 = Rational::from_integer(h2);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut ln_h_hat = pade_core::kernel::LogExpr::ln_scaled(&h2, &half);
        ln_h_hat.add_ln(&Rational::from_integer(BigInt::from(2 * m)), &Rational::from_integer(BigInt::from(m)));
        match pade_core::baker::admissibility_from(&ln_h_hat, &pipeline.constants.e1, &pipeline.constants.n2, m) {
            Ok(a) if a.status == Admissible::No => {}
            other => failures.push(format!("{:?}: admissibility at the box corner {other:?}", cfg.lambdas())),
        }
        match run_stress(cfg, &alpha, &spec, &cap) {
            Ok(s) => {
                if s.violations > 0 || s.undecided > 0 || s.admissible > 0 || s.admissibility_undecided > 0 {
                    failures.push(format!(
                        "{:?}: violations {} undecided {} admissible {}",
                        cfg.lambdas(),
                        s.violations,
                        s.undecided,
                        s.admissible
                    ));
                    for inc in &s.incidents {
                        println!("    incident {:?}: {:?}", cfg.lambdas(), inc);
                    }
                }
                if let Some(v) = s.min_margin.as_deref().and_then(|t| t.parse::<f64>().ok()) {
                    min_margin = Some(min_margin.map_or(v, |w: f64| w.min(v)));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", cfg.lambdas())),
        }
    }
    outcome(
        failures,
        format!(
            "{} configurations x {STRESS_TRIALS} forms at alpha = 1, min ln-margin {:.3}",
            configs.len(),
            min_margin.unwrap_or(f64::NAN)
        ),
    )
}

/// Number, name, budget and runner.
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "vanishing orders", LIMIT_VANISHING, vanishing),
        (2, "explicit equals oracle", LIMIT_ORACLE, explicit_equals_oracle),
        (3, "determinant identity", LIMIT_OMEGA, omega),
        (4, "cofactor identity", LIMIT_COFACTOR, cofactor),
        (5, "integrality and divisibility", LIMIT_INTEGRALITY, integrality),
        (6, "analytic bounds", LIMIT_ANALYTIC, analytic),
        (7, "rising factorial denominators", LIMIT_RISING, rising_denominators),
        (8, "constant identity", LIMIT_IDENTITY, identity),
        (9, "x2 residual", LIMIT_X2, x2_residual),
        (10, "empirical stress", LIMIT_STRESS, stress),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut all_pass = true;
    for (id, name, limit, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.failures.is_empty() && elapsed <= limit;
        all_pass &= pass;
        println!(
            "criterion {id:>2} {}: {name} ({:.1}s of {}s) {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            out.note
        );
        for f in out.failures.iter().take(10) {
            println!("    {f}");
        }
        if out.failures.len() > 10 {
            println!("    ... {} more", out.failures.len() - 10);
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
