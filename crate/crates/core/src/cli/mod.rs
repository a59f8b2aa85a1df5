//! The `qaskey` command-line front end.
//!
//! Every invocation runs one job and writes one table, either CSV or JSON,
//! to `--output` or stdout. The exit status is 0 when every residual the job
//! computes is under tolerance, 1 on a numerical failure or a residual above
//! tolerance, and 2 for an invalid job description.

mod commands;
mod grid;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::QError;
use crate::qcore::{
    Precision, QContext, DEFAULT_EPS_TRUNC, DEFAULT_ORTHO_TOL, DEFAULT_QUAD_TOL,
};

pub use commands::{run, MULTI_FAMILY_NAMES, SUITES};
pub use grid::{Grid, Spacing};
pub use output::{format_float, Cell, Format, Report, Summary, SCHEMA_VERSION};

/// Environment variable selecting `standard` or `extended` arithmetic.
pub const PRECISION_ENV: &str = "QASKEY_PRECISION";

pub const DEFAULT_Q: f64 = 0.5;

#[derive(Debug, Parser)]
#[command(name = "qaskey", version, about = "Evaluate and cross-check basic hypergeometric orthogonal polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate one polynomial on a grid, one (x, value) row per point.
    Eval(JobArgs),
    /// Coefficients in the native basis and in the monomial basis.
    Coeffs(JobArgs),
    /// Inner-product matrix of the first N+1 polynomials, or the multiple
    /// orthogonality conditions for a multiple family.
    Gram(JobArgs),
    /// Run an identity suite and report one residual per check.
    Verify(JobArgs),
    /// Modified moments from the closed form and from quadrature.
    Moments(JobArgs),
    /// Poles and zeros of the ratio of two weights differing in one parameter.
    Ratio(JobArgs),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Eval(_) => CommandKind::Eval,
            Command::Coeffs(_) => CommandKind::Coeffs,
            Command::Gram(_) => CommandKind::Gram,
            Command::Verify(_) => CommandKind::Verify,
            Command::Moments(_) => CommandKind::Moments,
            Command::Ratio(_) => CommandKind::Ratio,
        }
    }

    pub fn args(&self) -> &JobArgs {
        match self {
            Command::Eval(a)
            | Command::Coeffs(a)
            | Command::Gram(a)
            | Command::Verify(a)
            | Command::Moments(a)
            | Command::Ratio(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Eval,
    Coeffs,
    Gram,
    Verify,
    Moments,
    Ratio,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Eval => "eval",
            CommandKind::Coeffs => "coeffs",
            CommandKind::Gram => "gram",
            CommandKind::Verify => "verify",
            CommandKind::Moments => "moments",
            CommandKind::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct JobArgs {
    /// Family name, e.g. asc, aw, little_qjacobi, m_aw.
    #[arg(long)]
    pub family: Option<String>,
    /// Base q in (0, 1).
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated parameters; for multiple families a_1..a_r come first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
    /// Comma-separated multi-index of a multiple family.
    #[arg(long, value_delimiter = ',')]
    pub nvec: Option<Vec<usize>>,
    /// Degree, or the largest index for gram/verify/moments.
    #[arg(long)]
    pub n: Option<usize>,
    /// Evaluation grid: chebyshev:N, uniform:N or q-lattice:N.
    #[arg(long)]
    pub grid: Option<String>,
    /// Identity suite for verify (or `all`).
    #[arg(long)]
    pub suite: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eps_trunc: Option<f64>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub ortho_tol: Option<f64>,
}

/// Contents of a `--config` file. Flags override it.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<String>,
    pub q: Option<f64>,
    pub params: Option<Vec<f64>>,
    pub nvec: Option<Vec<usize>>,
    pub n: Option<usize>,
    pub grid: Option<String>,
    pub suite: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub eps_trunc: Option<f64>,
    pub quad_tol: Option<f64>,
    pub ortho_tol: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// A fully resolved job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: CommandKind,
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    pub nvec: Option<Vec<usize>>,
    pub n: Option<usize>,
    pub grid: Option<Grid>,
    pub suite: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub ctx: QContext,
}

impl JobSpec {
    /// Merges flags over the config file over the defaults.
    pub fn resolve(command: &Command, precision: Precision) -> Result<Self, CliError> {
        let args = command.args();
        let cfg = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let q = args.q.or(cfg.q).unwrap_or(DEFAULT_Q);
        let ctx = QContext::with_tolerances(
            q,
            args.eps_trunc.or(cfg.eps_trunc).unwrap_or(DEFAULT_EPS_TRUNC),
            args.quad_tol.or(cfg.quad_tol).unwrap_or(DEFAULT_QUAD_TOL),
            args.ortho_tol.or(cfg.ortho_tol).unwrap_or(DEFAULT_ORTHO_TOL),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_precision(precision);
        let grid = match args.grid.clone().or(cfg.grid) {
            Some(g) => Some(g.parse::<Grid>().map_err(CliError::Usage)?),
            None => None,
        };
        Ok(JobSpec {
            command: command.kind(),
            family: args.family.clone().or(cfg.family),
            params: args.params.clone().or(cfg.params),
            nvec: args.nvec.clone().or(cfg.nvec),
            n: args.n.or(cfg.n),
            grid,
            suite: args.suite.clone().or(cfg.suite),
            output: args.output.clone().or(cfg.output),
            format: args.format.or(cfg.format).unwrap_or_default(),
            ctx,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        match e {
            QError::InvalidParameter(_)
            | QError::Domain(_)
            | QError::CapExceeded { .. }
            | QError::AtCondition { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Reads [`PRECISION_ENV`]; unset means standard.
pub fn precision_from_env() -> Result<Precision, CliError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .parse::<Precision>()
            .map_err(|e| CliError::Usage(format!("{PRECISION_ENV}: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(Precision::Standard),
        Err(e) => Err(CliError::Usage(format!("{PRECISION_ENV}: {e}"))),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Numerical(format!("cannot write to stdout: {e}"))),
    }
}

/// Parses `args`, runs the job and returns the process exit status.
pub fn execute<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let job = match precision_from_env().and_then(|p| JobSpec::resolve(&cli.command, p)) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("qaskey: {e}");
            return e.exit_code();
        }
    };
    let (report, code) = match run(&job) {
        Ok(report) => {
            let code = if report.summary.pass { 0 } else { 1 };
            (report, code)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("qaskey: usage: {msg}");
            return 2;
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("qaskey: numerical failure: {msg}");
            let mut r = Report::new(job.command.name(), &["error"]);
            r.push(vec![msg.into()]);
            r.summary.pass = false;
            (r, 1)
        }
    };
    if let Err(e) = write_output(job.output.as_deref(), &report.render(job.format)) {
        eprintln!("qaskey: {e}");
        return e.exit_code();
    }
    eprintln!("qaskey {}: {}", job.command.name(), report.summary.line());
    code
}
