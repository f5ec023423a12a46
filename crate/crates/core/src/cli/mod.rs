//! Command-line front end. Every library operation is reachable from exactly one
//! subcommand, listed in [`OPERATIONS`].
//!
//! Exit codes: 0 computed and all checks passed, 2 computed with a negative verdict,
//! 3 usage error, 4 numerical failure.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::constraint::ConstraintError;
use crate::flows::FlowError;
use crate::rotation::RotationError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub const SCHEMA_VERSION: &str = "1";

/// `(module::operation, subcommand)` for every public operation.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("rotation::coboundary_solve", "rotation solve"),
    ("rotation::birkhoff_sums", "rotation birkhoff"),
    ("rotation::gottschalk_hedlund_test", "rotation gh-test"),
    ("rotation::build_liouville_theta", "rotation counterexample"),
    ("rotation::counterexample_pair", "rotation counterexample"),
    ("rotation::regularity_report", "rotation regularity"),
    ("rotation::evaluate", "rotation regularity"),
    ("flows::contact_vector_field", "flows integrate"),
    ("flows::flow_h", "flows integrate"),
    ("flows::flow_f", "flows integrate"),
    ("flows::liouville_flow_cotangent", "flows integrate"),
    ("flows::volume_flow", "flows integrate"),
    ("flows::bump_cutoff", "flows integrate"),
    ("flows::pullback_form", "flows integrate"),
    ("flows::verify_conformal_factor", "flows verify"),
    ("obstruction::find_fixed_points", "obstruction find-fixed"),
    ("obstruction::criterion_check", "obstruction check"),
    ("constraint::canonical_density", "constraint average"),
    ("constraint::average_check", "constraint average"),
    ("constraint::jensen_check", "constraint jensen"),
];

#[derive(Parser, Debug)]
#[command(name = "confdyn", version, about = "Rotation cocycles, conformal flows and their obstructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Cohomological equations over circle rotations.
    #[command(subcommand)]
    Rotation(RotationCmd),
    /// Model conformal flows and pullback checks.
    #[command(subcommand)]
    Flows(FlowsCmd),
    /// Fixed-point obstruction to invariant tensors.
    #[command(subcommand)]
    Obstruction(ObstructionCmd),
    /// Average-value constraint on the contact 3-torus.
    #[command(subcommand)]
    Constraint(ConstraintCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pass tolerance; each subcommand documents its default.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    /// JSON file holding a list of `[n, re, im]` triples.
    #[arg(long, conflicts_with = "terms")]
    pub series: Option<PathBuf>,
    /// Positive-frequency terms `n:re:im,...` of a real series.
    #[arg(long, allow_hyphen_values = true)]
    pub terms: Option<String>,
    /// Degree of the seeded random zero-mean series used when no series is given.
    #[arg(long, default_value_t = 8)]
    pub max_freq: u32,
    /// Constant added to the series.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean: f64,
    /// Rotation number in (0, 1), or `golden`.
    #[arg(long, default_value = "golden")]
    pub theta: String,
}

#[derive(Subcommand, Debug)]
pub enum RotationCmd {
    /// Solve g - g o R_theta = f coefficientwise.
    Solve {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = crate::rotation::DEFAULT_DENOM_FLOOR)]
        denom_floor: f64,
        /// Points used to measure the residual.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Partial sums S_k f(x0) along the rotation orbit.
    Birkhoff {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long = "K", default_value_t = 10_000)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Bounded-versus-linear growth of Birkhoff sums.
    GhTest {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long = "K", default_value_t = 10_000)]
        k: usize,
        /// Defaults to 2 sum|g(n)| + 1e-8 for the coboundary g of the zero-mean part.
        #[arg(long)]
        bound: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Liouville rotation number, frequency ladder and the smooth/C^0 pair.
    Counterexample {
        #[arg(long = "J", default_value_t = 8)]
        j: u32,
        /// Defaults to the smallest accepted budget for J.
        #[arg(long)]
        precision_bits: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient majorants and decay, with optional point evaluations.
    Regularity {
        #[command(flatten)]
        series: SeriesArgs,
        /// Comma-separated angles at which to evaluate the series.
        #[arg(long, allow_hyphen_values = true)]
        eval_at: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FlowArgs {
    /// One of H, F, liouville, volume, reeb.
    #[arg(long)]
    pub flow: String,
    /// Half-dimension for H, F, liouville; dimension for volume. Ignored for reeb.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Subcommand, Debug)]
pub enum FlowsCmd {
    /// Check phi_t^* tau = e^{f_t} tau at seeded sample points.
    Verify {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Use central-difference Jacobians even when an analytic one exists.
        #[arg(long)]
        fd: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Image, factor, vector field and pullback at one point.
    Integrate {
        #[command(flatten)]
        flow: FlowArgs,
        /// Comma-separated coordinates; defaults to the origin.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// RK4 steps for the volume flow; defaults to step size 1e-3.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        r_inner: f64,
        #[arg(long, default_value_t = 1.0)]
        r_outer: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Torus,
}

#[derive(Subcommand, Debug)]
pub enum ObstructionCmd {
    /// Newton search for fixed points of phi_t from seeded starts in [-1, 1]^d.
    FindFixed {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit-sum criterion at a candidate periodic point.
    Check {
        #[command(flatten)]
        flow: FlowArgs,
        /// Comma-separated coordinates; defaults to the origin.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = crate::obstruction::DEFAULT_FACTOR_TOL)]
        factor_tol: f64,
        /// Defaults to torus for the reeb flow and euclidean otherwise.
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    /// cos(2 pi z) dx + sin(2 pi z) dy
    Torus,
    /// dz, which is not contact
    Dz,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// CSV with columns x_index,y_index,z_index,value.
    #[arg(long, conflicts_with = "expr")]
    pub grid: Option<PathBuf>,
    /// zero | const:C | sin-x:AMP | mean-shift:C:AMP | neg-bump:AMP
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Points per axis for --expr.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value = "torus")]
    pub form: FormArg,
}

#[derive(Subcommand, Debug)]
pub enum ConstraintCmd {
    /// A = average of e^{(n+1) f} against the canonical volume.
    Average {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sign conditions on f implied by the average constraint.
    Jensen {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Negative(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Negative(_) => EXIT_NEGATIVE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Negative(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<RotationError> for CliError {
    fn from(e: RotationError) -> Self {
        match e {
            RotationError::SmallDenominator { .. } | RotationError::PrecisionExhausted { .. } => {
                CliError::Numerical(e.to_string())
            }
            // A nonzero mean is a definite answer: f is not a coboundary.
            RotationError::NonzeroMean(_) => CliError::Negative(e.to_string()),
            RotationError::NotRealValued
            | RotationError::ThetaOutOfRange(_)
            | RotationError::InvalidArgument(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::SingularJacobian { .. } | FlowError::NotConformal { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ConstraintError> for CliError {
    fn from(e: ConstraintError) -> Self {
        match e {
            ConstraintError::DegenerateContactForm { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Result of a subcommand: the machine artifact, a one-line summary and the exit code.
pub struct Outcome {
    pub json: Value,
    /// Table form; `None` falls back to flattened `key,value` rows of the JSON.
    pub csv: Option<String>,
    pub summary: String,
    pub exit: i32,
}

impl Outcome {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut json = self.json.clone();
                if let Value::Object(map) = &mut json {
                    map.insert("schema".into(), Value::String(SCHEMA_VERSION.into()));
                }
                let mut text = serde_json::to_string_pretty(&json).expect("JSON values serialize");
                text.push('\n');
                text
            }
            Format::Csv => match &self.csv {
                Some(table) => table.clone(),
                None => flatten_csv(&self.json),
            },
        }
    }
}

fn flatten_csv(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&key(k), v, rows)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&key(&i.to_string()), v, rows)),
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

/// Parses `argv` (including the program name), runs the subcommand and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (result, common) = commands::dispatch(cli.command);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    let text = outcome.render(common.format);
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text.as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            println!("{}", outcome.summary);
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            eprintln!("{}", outcome.summary);
        }
    }
    outcome.exit
}
