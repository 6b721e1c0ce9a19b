//! Batch front end.
//!
//! Exit codes: `0` success, `1` output I/O failure, `2` invalid
//! configuration, `3` unreadable or malformed input, `4` numeric failure in
//! the solver.

mod config;
mod io;
mod report;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{Algorithm, ExperimentConfig, InputFormat, RawConfig, KEYS};
pub use io::{
    fmt_f64, labels_to_csv, matrix_to_csv, read_dense_csv, read_features_csv, read_matrix_market,
    trace_to_csv, TRACE_HEADER,
};
pub use report::{Report, RunSummary};
pub use run::{load_similarity, run_experiment};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("output error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}", fmt_parse(.path, *.line, .message))]
    Parse {
        path: String,
        /// 1-based; `0` when the problem is not tied to one line.
        line: usize,
        message: String,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
}

fn fmt_parse(path: &str, line: usize, message: &str) -> String {
    if line == 0 {
        format!("parse error in {path}: {message}")
    } else {
        format!("parse error in {path} at line {line}: {message}")
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

/// Factorize a symmetric similarity matrix and cluster with the factor.
///
/// Every option may also be given in a `--config` file as `key = value`
/// (with `_` in place of `-`); flags override the file.
#[derive(Debug, Parser)]
#[command(name = "symfact", version)]
pub struct Args {
    /// Flat `key = value` file with any of the options below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, value_parser = ["dense_csv", "matrix_market_symmetric", "features_csv"])]
    pub format: Option<String>,
    /// Similarity built from features_csv input.
    #[arg(long, value_parser = ["inner_product", "cosine", "rbf"])]
    pub similarity: Option<String>,
    /// RBF bandwidth.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub lambda_reg: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, value_parser = ["columnwise", "pgd"])]
    pub algorithm: Option<String>,
    #[arg(long, value_parser = ["unconstrained", "nonnegative", "unit_row_norm", "row_sparsity", "orthogonal"])]
    pub constraint: Option<String>,
    #[arg(long)]
    pub sparsity_s: Option<String>,
    /// Splitting penalty; derived from the initial point when omitted.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub mu_margin: Option<String>,
    #[arg(long)]
    pub max_iter: Option<String>,
    #[arg(long)]
    pub rel_tol: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub repeats: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Projected-gradient stepsize; adaptive when omitted.
    #[arg(long)]
    pub fixed_step: Option<String>,
    /// Clamp column updates at zero (columnwise).
    #[arg(long)]
    pub nonneg_columns: bool,
    /// Fill the wall_ms trace column.
    #[arg(long)]
    pub record_time: bool,
}

impl Args {
    /// File values first, then flags.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let mut flags = RawConfig::default();
        let pairs = [
            ("input", &self.input),
            ("format", &self.format),
            ("similarity", &self.similarity),
            ("sigma", &self.sigma),
            ("lambda_reg", &self.lambda_reg),
            ("k", &self.k),
            ("algorithm", &self.algorithm),
            ("constraint", &self.constraint),
            ("sparsity_s", &self.sparsity_s),
            ("mu", &self.mu),
            ("mu_margin", &self.mu_margin),
            ("max_iter", &self.max_iter),
            ("rel_tol", &self.rel_tol),
            ("seed", &self.seed),
            ("repeats", &self.repeats),
            ("out", &self.out),
            ("fixed_step", &self.fixed_step),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.clone())?;
            }
        }
        if self.nonneg_columns {
            flags.set("nonneg_columns", "true")?;
        }
        if self.record_time {
            flags.set("record_time", "true")?;
        }
        raw.merge(flags);
        ExperimentConfig::from_values(&raw)
    }
}

/// Parses `args`, runs the experiment and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = args.resolve().and_then(|cfg| run_experiment(&cfg));
    match outcome {
        Ok(report) => {
            for run in &report.runs {
                println!(
                    "seed {}: objective {} rel_error {} iters {}",
                    run.seed,
                    fmt_f64(run.final_objective),
                    fmt_f64(run.final_rel_error),
                    run.iters
                );
            }
            0
        }
        Err(e) => {
            eprintln!("symfact: {e}");
            e.exit_code()
        }
    }
}
