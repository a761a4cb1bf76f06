use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use supply_core::{CheckKind, Scalar, ScalarMode};

#[derive(Parser, Debug)]
#[command(name = "supplycheck", version, about = "Revealed-preference checks for observed supply data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run data checks on a dataset file.
    Check {
        dataset: PathBuf,
        /// Comma-separated subset of los,h0,wapm,const,cyclic.
        #[arg(long, value_delimiter = ',', default_value = "los,h0,wapm,const,cyclic")]
        checks: Vec<CheckKind>,
        /// Comparison tolerance (float datasets only).
        #[arg(long)]
        tol: Option<f64>,
        /// Also enumerate every cycle up to this length.
        #[arg(long)]
        max_cycle_len: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build the convex hull of the observed plans.
    Rationalize {
        dataset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        verify: Option<VerifyMode>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Test a dataset against a given production set.
    Verify {
        dataset: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample an oracle's supply correspondence.
    Generate {
        /// polytope:<file>, ball:<r>[:<dim>], rotation:<deg>, ellipsoid:<file> or figure1:<S-file>.
        #[arg(long, value_parser = parse_oracle)]
        oracle: OracleSpec,
        /// sphere:<n>, grid:<k> or file:<f>.
        #[arg(long, value_parser = parse_prices)]
        prices: PriceSpec,
        /// Comma-separated positive multipliers; each price p is followed by λp.
        #[arg(long, value_delimiter = ',', value_parser = parse_multiplier)]
        dup: Vec<Scalar>,
        /// Extra prices where a polytope's face has several generators.
        #[arg(long, default_value_t = 0)]
        ties: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<ScalarMode>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Add uniform noise to the plans of a float dataset.
    Perturb {
        dataset: PathBuf,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-difference Jacobian of a single-valued oracle.
    Jacobian {
        #[arg(long, value_parser = parse_oracle)]
        oracle: OracleSpec,
        /// Comma-separated price coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, default_value_t = supply_core::smooth::DEFAULT_STEP)]
        h: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Worked examples.
    Demo {
        #[arg(value_enum)]
        target: DemoTarget,
        /// endpoints, endpoints+midpoint, or a JSON file listing S.
        #[arg(long, default_value = "endpoints+midpoint")]
        s: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VerifyMode {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DemoTarget {
    Figure1,
}

#[derive(Clone, Debug)]
pub enum OracleSpec {
    Polytope(PathBuf),
    Ball { radius: f64, dimension: usize },
    Rotation(f64),
    Ellipsoid(PathBuf),
    Figure1(PathBuf),
}

#[derive(Clone, Debug)]
pub enum PriceSpec {
    Sphere(usize),
    Grid(i64),
    File(PathBuf),
}

fn parse_oracle(s: &str) -> Result<OracleSpec, String> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| format!("expected kind:argument, got `{s}`"))?;
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(match kind {
        "polytope" => OracleSpec::Polytope(rest.into()),
        "ellipsoid" => OracleSpec::Ellipsoid(rest.into()),
        "figure1" => OracleSpec::Figure1(rest.into()),
        "rotation" => OracleSpec::Rotation(num(rest)?),
        "ball" => match rest.split_once(':') {
            Some((r, n)) => OracleSpec::Ball { radius: num(r)?, dimension: n.parse().map_err(|e| format!("`{n}`: {e}"))? },
            None => OracleSpec::Ball { radius: num(rest)?, dimension: 2 },
        },
        _ => return Err(format!("unknown oracle `{kind}`")),
    })
}

fn parse_prices(s: &str) -> Result<PriceSpec, String> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| format!("expected kind:argument, got `{s}`"))?;
    Ok(match kind {
        "sphere" => PriceSpec::Sphere(rest.parse().map_err(|e| format!("`{rest}`: {e}"))?),
        "grid" => PriceSpec::Grid(rest.parse().map_err(|e| format!("`{rest}`: {e}"))?),
        "file" => PriceSpec::File(rest.into()),
        _ => return Err(format!("unknown price sampler `{kind}`")),
    })
}

fn parse_multiplier(s: &str) -> Result<Scalar, String> {
    s.parse::<supply_core::Rational>().map(Scalar::Exact).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<ScalarMode, String> {
    match s {
        "rational" => Ok(ScalarMode::Rational),
        "float" => Ok(ScalarMode::Float),
        _ => Err(format!("unknown mode `{s}` (expected rational or float)")),
    }
}
