//! `pade`: construct, verify and certify Padé systems for `phi_lambda`, and
//! evaluate the resulting lower bound for linear forms in its values.
//!
//! Exit codes: 0 success, 1 a check or comparison failed, 2 invalid input,
//! 3 a comparison stayed undecided at the precision cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use pade_core::baker::{
    certify, compare_with_bound, comparison_height, evaluate_linear_form, theorem_bound_from, LinearForm, Mode,
    Pipeline, BOUND_BITS,
};
use pade_core::certificates::{certify_system, verify_omega};
use pade_core::efunction::parse_lambdas;
use pade_core::kernel::rational::parse_rational;
use pade_core::kernel::{precision_cap, AlgebraicRatio, Rational, Status};
use pade_core::pade::{build_system, DegreeVector, PadeSystem, Source};
use pade_core::stress::{run_stress, StressSpec, DEFAULT_BOX, DEFAULT_TRIALS};
use pade_core::{validate_config, LambdaConfig, PadeError};

#[derive(Parser, Debug)]
#[command(name = "pade", version, about = "Exact Padé systems for phi_lambda and Baker-type bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the system for the given parameters and degrees.
    Construct {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        degrees: String,
        #[arg(long, value_enum, default_value_t = SourceArg::Explicit)]
        source: SourceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a system file: degrees, vanishing orders, determinant identity
    /// and agreement with the linear-system solution.
    Verify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Denominators, integrality and size bounds of a system file at `alpha`.
    Certify {
        file: PathBuf,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound constants, and the full report for one form when `--beta` is set.
    Bound {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Width of the reported enclosures.
        #[arg(long, default_value = "1e-20")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enclose `beta_0 + sum beta_j phi_j(alpha)` and compare it with the bound.
    Evaluate {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "1e-20")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random forms compared with the bound.
    Stress {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        bound_box: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Params {
    /// Comma separated, e.g. `0,1/2,-1/3`.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: String,
}

#[derive(Args, Debug)]
struct Point {
    /// `p/q`, or a quadratic literal such as `1+i` when `--field` is nonzero.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// `d` in `Q(sqrt(-d))`; 0 for the rationals.
    #[arg(long, default_value_t = 0)]
    field: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SourceArg {
    Explicit,
    Oracle,
    Both,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<PadeError> for Failure {
    fn from(e: PadeError) -> Self {
        let code = match e {
            PadeError::EmptyConfig
            | PadeError::NegativeIntegerLambda(_)
            | PadeError::IntegerDifference(..)
            | PadeError::ParameterTooLarge(_)
            | PadeError::InvalidDegrees(_)
            | PadeError::ZeroFactor { .. }
            | PadeError::InvalidField(_)
            | PadeError::FieldMismatch(..)
            | PadeError::InvalidQuadratic(_)
            | PadeError::DivisionByZero
            | PadeError::ZeroLinearForm
            | PadeError::Arity { .. }
            | PadeError::Domain(_)
            | PadeError::Parse(_) => 2,
            _ => 1,
        };
        Self {
            code,
            message: format!("{}: {e}", variant_name(&e)),
        }
    }
}

fn variant_name(e: &PadeError) -> String {
    format!("{e:?}")
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

type Outcome = Result<u8, Failure>;

fn config(params: &Params) -> Result<LambdaConfig, Failure> {
    Ok(validate_config(&parse_lambdas(&params.lambdas)?)?)
}

fn alpha(point: &Point) -> Result<AlgebraicRatio, Failure> {
    let a = AlgebraicRatio::parse(&point.alpha, point.field)?;
    if a.is_zero() {
        return Err(Failure::invalid("Domain: alpha must be nonzero"));
    }
    Ok(a)
}

fn positive(text: &str, what: &str) -> Result<Rational, Failure> {
    let q = parse_rational(text)?;
    if q <= Rational::from_integer(0.into()) {
        return Err(Failure::invalid(format!("{what} must be positive")));
    }
    Ok(q)
}

fn read_system(path: &Path) -> Result<PadeSystem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Writes pretty JSON to `out`, or to stdout.
fn emit(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports always serialize")
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Undecided => 3,
    }
}

/// Entries where two systems with the same parameters disagree.
fn diff_systems(a: &PadeSystem, b: &PadeSystem) -> Vec<Value> {
    let mut out = Vec::new();
    for (i, (ra, rb)) in a.rows().iter().zip(b.rows()).enumerate() {
        if ra.q != rb.q {
            out.push(json!({ "row": i, "poly": "Q", "explicit": to_value(&ra.q), "oracle": to_value(&rb.q) }));
        }
        for (j, (pa, pb)) in ra.p.iter().zip(&rb.p).enumerate() {
            if pa != pb {
                out.push(json!({
                    "row": i,
                    "poly": format!("P{}", j + 1),
                    "explicit": to_value(pa),
                    "oracle": to_value(pb),
                }));
            }
        }
    }
    out
}

fn construct(params: &Params, degrees: &str, source: SourceArg, out: Option<&Path>) -> Outcome {
    let cfg = config(params)?;
    let degrees = DegreeVector::parse(degrees, cfg.m())?;
    match source {
        SourceArg::Explicit | SourceArg::Oracle => {
            let src = if source == SourceArg::Explicit {
                Source::Explicit
            } else {
                Source::Oracle
            };
            emit(&to_value(&build_system(&cfg, &degrees, src)?), out)?;
            Ok(0)
        }
        SourceArg::Both => {
            let explicit = build_system(&cfg, &degrees, Source::Explicit)?;
            let oracle = build_system(&cfg, &degrees, Source::Oracle)?;
            let diff = diff_systems(&explicit, &oracle);
            let code = u8::from(!diff.is_empty());
            emit(
                &json!({ "schema": 1, "system": to_value(&explicit), "diff": diff }),
                out,
            )?;
            Ok(code)
        }
    }
}

fn check(name: &str, ok: bool, detail: Value) -> Value {
    json!({ "name": name, "status": if ok { "pass" } else { "fail" }, "detail": detail })
}

fn verify(file: &Path, out: Option<&Path>) -> Outcome {
    let system = read_system(file)?;
    let mut checks = Vec::new();
    let issues = system.structural_issues();
    checks.push(check(
        "degrees",
        issues.is_empty(),
        json!(issues.iter().map(|(row, what)| format!("row {row}: {what}")).collect::<Vec<_>>()),
    ));
    match system.order_checks() {
        Ok(orders) => {
            let bad: Vec<&pade_core::pade::OrderCheck> = orders.iter().filter(|c| !c.holds()).collect();
            checks.push(check("vanishing", bad.is_empty(), to_value(&bad)));
        }
        Err(e) => checks.push(check("vanishing", false, json!(e.to_string()))),
    }
    match verify_omega(&system) {
        Ok(report) => checks.push(check(
            "omega",
            true,
            json!({ "degree": report.expected_degree, "constant": report.expected_constant }),
        )),
        Err(e) => checks.push(check("omega", false, json!(e.to_string()))),
    }
    match build_system(system.config(), system.degrees(), Source::Oracle) {
        Ok(oracle) => {
            let diff = diff_systems(&system, &oracle);
            checks.push(check("oracle", diff.is_empty(), json!(diff)));
        }
        Err(e) => checks.push(check("oracle", false, json!(e.to_string()))),
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap_or_default().to_string())
        .collect();
    let status = if failed.is_empty() { "pass" } else { "fail" };
    emit(&json!({ "schema": 1, "status": status, "checks": checks }), out)?;
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(1)
    }
}

fn certify_file(file: &Path, point: &Point, out: Option<&Path>) -> Outcome {
    let system = read_system(file)?;
    let a = alpha(point)?;
    let cert = certify_system(&system, &a, &precision_cap())?;
    emit(&to_value(&cert), out)?;
    for c in cert.checks.iter().filter(|c| c.status != Status::Pass) {
        eprintln!("{}: {:?}", c.name, c.status);
    }
    Ok(status_code(cert.status))
}

fn bound(params: &Params, point: &Point, beta: Option<&str>, eps: &str, out: Option<&Path>) -> Outcome {
    let cfg = config(params)?;
    let a = alpha(point)?;
    let eps = positive(eps, "eps")?;
    let pipeline = Pipeline::new(&cfg, &a)?;
    let Some(beta) = beta else {
        let report = pipeline.report(&eps);
        let mut value = json!({
            "schema": 1,
            "lambdas": cfg.lambdas().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "alpha": a.to_string(),
            "field": a.d(),
        });
        if let (Value::Object(map), Value::Object(rest)) = (&mut value, to_value(&report)) {
            map.extend(rest);
        }
        emit(&value, out)?;
        return Ok(0);
    };
    let form = LinearForm::parse(beta, a)?;
    let report = certify(&form, &cfg, &pipeline, &precision_cap())?;
    emit(&to_value(&report), out)?;
    Ok(status_code(report.comparison.verdict))
}

fn evaluate(params: &Params, point: &Point, beta: &str, eps: &str, out: Option<&Path>) -> Outcome {
    let cfg = config(params)?;
    let a = alpha(point)?;
    let eps = positive(eps, "eps")?;
    let form = LinearForm::parse(beta, a.clone())?;
    let (re, im) = evaluate_linear_form(&form, &cfg, &eps)?;
    let pipeline = Pipeline::new(&cfg, &a)?;
    let (h2, ln_h, clamped) = comparison_height(&form);
    let ln_bound = theorem_bound_from(&ln_h, &pipeline.d.combined(form.m()), BOUND_BITS)?;
    let comparison = compare_with_bound(&form, &cfg, &ln_bound, &precision_cap())?;
    let approx = |x: &pade_core::kernel::RatInterval| num_to_f64(&x.midpoint());
    emit(
        &json!({
            "schema": 1,
            "lambdas": cfg.lambdas().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "alpha": a.to_string(),
            "field": a.d(),
            "beta": form.beta().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "eps": eps.to_string(),
            "lambda_re": to_value(&re.round_out(eps_bits(&eps))),
            "lambda_im": to_value(&im.round_out(eps_bits(&eps))),
            "lambda_approx": [format!("{:.12e}", approx(&re)), format!("{:.12e}", approx(&im))],
            "comparison_H_squared": h2.to_string(),
            "clamped": clamped,
            "comparison": to_value(&comparison),
            "mode": Mode::Empirical,
        }),
        out,
    )?;
    Ok(status_code(comparison.verdict))
}

fn eps_bits(eps: &Rational) -> u32 {
    pade_core::kernel::elementary::eps_bits(eps) + 8
}

fn num_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn stress(params: &Params, point: &Point, spec: &StressSpec, out: Option<&Path>) -> Outcome {
    let cfg = config(params)?;
    let a = alpha(point)?;
    if spec.bound_box == 0 {
        return Err(Failure::invalid("box must be positive"));
    }
    let summary = run_stress(&cfg, &a, spec, &precision_cap())?;
    emit(&to_value(&summary), out)?;
    Ok(if summary.violations > 0 {
        1
    } else if summary.undecided > 0 {
        3
    } else {
        0
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            params,
            degrees,
            source,
            out,
        } => construct(&params, &degrees, source, out.as_deref()),
        Command::Verify { file, out } => verify(&file, out.as_deref()),
        Command::Certify { file, point, out } => certify_file(&file, &point, out.as_deref()),
        Command::Bound {
            params,
            point,
            beta,
            eps,
            out,
        } => bound(&params, &point, beta.as_deref(), &eps, out.as_deref()),
        Command::Evaluate {
            params,
            point,
            beta,
            eps,
            out,
        } => evaluate(&params, &point, &beta, &eps, out.as_deref()),
        Command::Stress {
            params,
            point,
            trials,
            seed,
            bound_box,
            out,
        } => stress(
            &params,
            &point,
            &StressSpec {
                trials,
                seed,
                bound_box,
            },
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
