//! `supplycheck`: revealed-preference checks for supply data.
//!
//! Exit status: 0 when every requested check passes, 1 when one fails, 2 on
//! bad input or usage.

mod args;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use supply_core::checks::{CheckReport, Checker};
use supply_core::forward::{self, GeneratorConfig, PriceSampler, SupplyOracle};
use supply_core::rationalize::{self, MixtureGrid, RationalizeError};
use supply_core::smooth::{self, Tolerances};
use supply_core::{Arith, Dataset, PolytopeV, Scalar, ScalarMode, Vector};

use args::{Cli, Command, DemoTarget, OracleSpec, PriceSpec, VerifyMode};

/// Input or usage problem; maps to exit status 2.
struct UsageError(String);

impl<E: Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { dataset, checks, tol, max_cycle_len, report } => check(&dataset, &checks, tol, max_cycle_len, report.as_deref()),
        Command::Rationalize { dataset, out, verify, report } => rationalize_cmd(&dataset, out.as_deref(), verify, report.as_deref()),
        Command::Verify { dataset, polytope, mode, report } => verify(&dataset, &polytope, mode, report.as_deref()),
        Command::Generate { oracle, prices, dup, ties, seed, mode, tol, out } => {
            generate(&oracle, &prices, dup, ties, seed, mode, tol, &out)
        }
        Command::Perturb { dataset, noise, seed, out } => {
            let ds = Dataset::load(&dataset)?;
            let noisy = forward::perturb(&ds, noise, seed)?;
            noisy.save(&out)?;
            println!("wrote {} observations to {}", noisy.observations().len(), out.display());
            Ok(true)
        }
        Command::Jacobian { oracle, at, h, report } => jacobian(&oracle, &at, h, report.as_deref()),
        Command::Demo { target: DemoTarget::Figure1, s, report } => demo_figure1(&s, report.as_deref()),
    }
}

fn write_report(path: Option<&Path>, doc: &Value) -> Result<(), UsageError> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(doc)? + "\n";
        std::fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_reports(reports: &[CheckReport]) -> bool {
    for r in reports {
        println!("{}", r.summary_line());
    }
    reports.iter().all(|r| r.passed)
}

fn check(path: &Path, checks: &[supply_core::CheckKind], tol: Option<f64>, max_cycle_len: Option<usize>, report: Option<&Path>) -> Outcome {
    let mut ds = Dataset::load(path)?;
    if let Some(tol) = tol {
        ds = Dataset::new(ds.dimension(), ds.mode(), Some(tol), ds.price_domain(), ds.observations().to_vec())?;
    }
    let checker = Checker::new(&ds);
    let reports: Vec<CheckReport> = checks
        .iter()
        .map(|&k| match k {
            supply_core::CheckKind::CyclicMonotonicity => checker.cyclic_monotonicity(max_cycle_len),
            k => checker.run(k),
        })
        .collect();
    let passed = print_reports(&reports);
    write_report(report, &json!({ "command": "check", "dataset": path, "passed": passed, "reports": reports }))?;
    Ok(passed)
}

fn rationalize_cmd(path: &Path, out: Option<&Path>, mode: Option<VerifyMode>, report: Option<&Path>) -> Outcome {
    let ds = Dataset::load(path)?;
    let built = match rationalize::rationalize_build(&ds) {
        Ok(r) => r,
        Err(RationalizeError::PreconditionFailed(r)) => {
            println!("{}", r.summary_line());
            write_report(report, &json!({ "command": "rationalize", "passed": false, "precondition": *r }))?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let verdict = if built.weak_verified { "PASS" } else { "FAIL" };
    println!("{verdict} rationalize generators={}", built.production_set.generators().len());
    if let Some(out) = out {
        built.production_set.save(out)?;
        println!("wrote production set to {}", out.display());
    }
    let mut passed = built.weak_verified;
    let mut verification = Value::Null;
    if let Some(mode) = mode {
        let r = run_verify(&ds, &built.production_set, mode)?;
        passed &= print_reports(std::slice::from_ref(&r));
        verification = serde_json::to_value(&r)?;
    }
    write_report(
        report,
        &json!({
            "command": "rationalize",
            "passed": passed,
            "weak_verified": built.weak_verified,
            "production_set": built.production_set.generators(),
            "margins": built.margins,
            "verification": verification,
        }),
    )?;
    Ok(passed)
}

fn run_verify(ds: &Dataset, y: &PolytopeV, mode: VerifyMode) -> Result<CheckReport, UsageError> {
    Ok(match mode {
        VerifyMode::Weak => rationalize::verify_weak(ds, y)?,
        VerifyMode::Strong => rationalize::verify_strong(ds, y)?,
    })
}

fn verify(path: &Path, polytope: &Path, mode: VerifyMode, report: Option<&Path>) -> Outcome {
    let ds = Dataset::load(path)?;
    let y = PolytopeV::load(polytope)?;
    if y.dimension() != ds.dimension() {
        return Err(UsageError(format!("polytope has dimension {}, dataset {}", y.dimension(), ds.dimension())));
    }
    if y.mode() != ds.mode() {
        return Err(UsageError("polytope and dataset use different scalar modes".into()));
    }
    let r = run_verify(&ds, &y, mode)?;
    let passed = print_reports(std::slice::from_ref(&r));
    write_report(report, &json!({ "command": "verify", "passed": passed, "reports": [r] }))?;
    Ok(passed)
}

fn build_oracle(spec: &OracleSpec) -> Result<SupplyOracle, UsageError> {
    Ok(match spec {
        OracleSpec::Polytope(path) => SupplyOracle::Polytope(PolytopeV::load(path)?),
        OracleSpec::Ball { radius, dimension } => SupplyOracle::ball(*dimension, *radius)?,
        OracleSpec::Rotation(deg) => SupplyOracle::rotation(*deg)?,
        OracleSpec::Ellipsoid(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            SupplyOracle::ellipsoid(serde_json::from_str(&text)?)?
        }
        OracleSpec::Figure1(path) => SupplyOracle::figure1(supply_core::io::load_vectors(path, ScalarMode::Rational)?)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn generate(
    oracle: &OracleSpec,
    prices: &PriceSpec,
    dup: Vec<Scalar>,
    ties: usize,
    seed: u64,
    mode: Option<ScalarMode>,
    tol: Option<f64>,
    out: &Path,
) -> Outcome {
    let oracle = build_oracle(oracle)?;
    let mode = mode.unwrap_or(if oracle.is_exact() { ScalarMode::Rational } else { ScalarMode::Float });
    let sampler = match prices {
        PriceSpec::Sphere(count) => PriceSampler::Sphere { count: *count },
        PriceSpec::Grid(k) => PriceSampler::Grid { half_width: *k },
        PriceSpec::File(path) => PriceSampler::Explicit(supply_core::io::load_vectors(path, mode)?),
    };
    let mut cfg = GeneratorConfig::new(sampler, seed, mode);
    cfg.multipliers = dup;
    cfg.tie_prices = ties;
    cfg.tolerance = tol;
    let generated = forward::generate(&oracle, &cfg)?;
    generated.dataset.save(out)?;
    println!(
        "wrote {} observations to {} (skipped {})",
        generated.dataset.observations().len(),
        out.display(),
        generated.skipped
    );
    Ok(true)
}

fn jacobian(oracle: &OracleSpec, at: &[f64], h: f64, report: Option<&Path>) -> Outcome {
    let oracle = build_oracle(oracle)?;
    let tol = Tolerances::default();
    let check = smooth::check_jacobian_conditions(&oracle, &[at.to_vec()], h, tol)?;
    let r = &check.reports[0];
    for row in &r.matrix {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.9e}")).collect();
        println!("  [{}]", cells.join(", "));
    }
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    println!("{} symmetry defect={:e} tol={:e}", verdict(r.symmetry_defect <= tol.symmetry), r.symmetry_defect, tol.symmetry);
    println!("{} psd min_eigenvalue={:e} tol={:e}", verdict(r.min_eigenvalue >= -tol.psd), r.min_eigenvalue, tol.psd);
    println!("{} euler residual={:e} tol={:e}", verdict(r.euler_residual <= tol.euler), r.euler_residual, tol.euler);
    write_report(report, &serde_json::to_value(&check)?)?;
    Ok(check.passed)
}

fn demo_figure1(s: &str, report: Option<&Path>) -> Outcome {
    let oracle = match s {
        "endpoints" => SupplyOracle::figure1_endpoints(),
        "endpoints+midpoint" => SupplyOracle::figure1_with_midpoint(),
        file => SupplyOracle::figure1(supply_core::io::load_vectors(&PathBuf::from(file), ScalarMode::Rational)?)?,
    };
    let SupplyOracle::Figure1 { s: plans } = &oracle else { unreachable!() };
    let listed: Vec<String> = plans.iter().map(|z| z.to_string()).collect();
    println!("S = {{{}}}", listed.join(", "));

    let prices = vec![Vector::ints(&[1, 1]), Vector::ints(&[2, 1]), Vector::ints(&[1, 2])];
    let mut cfg = GeneratorConfig::new(PriceSampler::Explicit(prices.clone()), 0, ScalarMode::Rational);
    cfg.multipliers = vec![Scalar::from_int(2, ScalarMode::Rational)];
    let ds = forward::generate(&oracle, &cfg)?.dataset;

    let checker = Checker::new(&ds);
    let mut reports = vec![checker.law_of_supply(), checker.homogeneity()];
    print_reports(&reports);
    let built = rationalize::rationalize_build(&ds)?;
    let y = built.production_set;
    let gens: Vec<String> = y.generators().iter().map(|z| z.to_string()).collect();
    println!("Y = conv{{{}}}", gens.join(", "));
    let weak = rationalize::verify_weak(&ds, &y)?;
    let strong = rationalize::verify_strong(&ds, &y)?;
    print_reports(&[weak.clone(), strong.clone()]);
    reports.push(weak);
    reports.push(strong);

    let witness = rationalize::extension_witness(&oracle, &y, &prices, &MixtureGrid::default(), &Arith::exact())?;
    match &witness {
        Some(w) => println!(
            "extension witness: z* = {} at p* = {} attains_support={} monotone_consistent={} kind={:?}",
            w.plan, w.price, w.attains_support, w.monotone_consistent, w.kind
        ),
        None => println!("extension witness: none"),
    }
    let passed = reports.iter().all(|r| r.passed);
    write_report(
        report,
        &json!({
            "command": "demo",
            "target": "figure1",
            "s": plans,
            "dataset": serde_json::from_str::<Value>(&ds.to_json())?,
            "production_set": y.generators(),
            "reports": reports,
            "extension_witness": witness,
        }),
    )?;
    Ok(passed)
}
