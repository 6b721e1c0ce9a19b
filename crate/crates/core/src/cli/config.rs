//! Experiment configuration: a flat `key = value` file, overridden by flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::graph::Similarity;
use crate::solver::{ConstraintSpec, SolverConfig, StepRule};

/// Every key accepted in a config file. Flags use the same names with `-`.
pub const KEYS: &[&str] = &[
    "input",
    "format",
    "similarity",
    "sigma",
    "lambda_reg",
    "k",
    "algorithm",
    "constraint",
    "sparsity_s",
    "mu",
    "mu_margin",
    "max_iter",
    "rel_tol",
    "seed",
    "repeats",
    "out",
    "nonneg_columns",
    "fixed_step",
    "record_time",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    DenseCsv,
    MatrixMarketSymmetric,
    FeaturesCsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Columnwise,
    Pgd,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Columnwise => "columnwise",
            Algorithm::Pgd => "pgd",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    /// Only consulted for [`InputFormat::FeaturesCsv`].
    pub similarity: Similarity,
    pub lambda_reg: f64,
    pub k: usize,
    pub algorithm: Algorithm,
    pub constraint: ConstraintSpec,
    pub solver: SolverConfig,
    pub out: PathBuf,
    /// Runs seeds `solver.seed .. solver.seed + repeats`.
    pub repeats: usize,
    /// Fill the `wall_ms` trace column. Off by default so reruns are byte-identical.
    pub record_time: bool,
}

/// Raw key/value pairs, later typed by [`ExperimentConfig::from_values`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses a config file. `#` starts a comment. Relative `input` and `out`
    /// paths are resolved against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected 'key = value'",
                    path.display(),
                    i + 1
                )));
            };
            let key = key.trim().replace('-', "_");
            let mut value = value.trim().to_string();
            if key == "input" || key == "out" {
                value = base.join(&value).display().to_string();
            }
            raw.set(&key, value).map_err(|e| match e {
                CliError::Config(m) => {
                    CliError::Config(format!("{}:{}: {m}", path.display(), i + 1))
                }
                other => other,
            })?;
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Later values win.
    pub fn merge(&mut self, other: RawConfig) {
        self.values.extend(other.values);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn parse<T: std::str::FromStr>(raw: &RawConfig, key: &str) -> Result<Option<T>, CliError> {
    raw.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Config(format!("invalid value for '{key}': {v:?}")))
        })
        .transpose()
}

fn parse_bool(raw: &RawConfig, key: &str) -> Result<bool, CliError> {
    match raw.get(key) {
        None => Ok(false),
        Some("true" | "1" | "yes") => Ok(true),
        Some("false" | "0" | "no") => Ok(false),
        Some(v) => Err(CliError::Config(format!(
            "invalid value for '{key}': {v:?}"
        ))),
    }
}

fn positive_f64(raw: &RawConfig, key: &str) -> Result<Option<f64>, CliError> {
    match parse::<f64>(raw, key)? {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(CliError::Config(format!(
            "'{key}' must be a finite value > 0, got {v}"
        ))),
        other => Ok(other),
    }
}

impl ExperimentConfig {
    pub fn from_values(raw: &RawConfig) -> Result<Self, CliError> {
        let input = raw
            .get("input")
            .map(PathBuf::from)
            .ok_or_else(|| CliError::Config("missing required key 'input'".into()))?;
        let format = match raw.get("format").unwrap_or("dense_csv") {
            "dense_csv" => InputFormat::DenseCsv,
            "matrix_market_symmetric" => InputFormat::MatrixMarketSymmetric,
            "features_csv" => InputFormat::FeaturesCsv,
            v => {
                return Err(CliError::Config(format!(
                    "invalid value for 'format': {v:?}"
                )))
            }
        };
        let sigma = positive_f64(raw, "sigma")?;
        let similarity = match raw.get("similarity").unwrap_or("inner_product") {
            "inner_product" => Similarity::InnerProduct,
            "cosine" => Similarity::Cosine,
            "rbf" => Similarity::Rbf {
                sigma: sigma.ok_or_else(|| {
                    CliError::Config("'similarity = rbf' requires 'sigma'".into())
                })?,
            },
            v => {
                return Err(CliError::Config(format!(
                    "invalid value for 'similarity': {v:?}"
                )))
            }
        };
        if format != InputFormat::FeaturesCsv && raw.get("similarity").is_some() {
            return Err(CliError::Config(
                "'similarity' only applies to format = features_csv".into(),
            ));
        }
        let lambda_reg = parse::<f64>(raw, "lambda_reg")?.unwrap_or(0.0);
        if !(lambda_reg >= 0.0 && lambda_reg.is_finite()) {
            return Err(CliError::Config(format!(
                "'lambda_reg' must be a finite value >= 0, got {lambda_reg}"
            )));
        }
        let k = parse::<usize>(raw, "k")?
            .ok_or_else(|| CliError::Config("missing required key 'k'".into()))?;
        if k == 0 {
            return Err(CliError::Config("'k' must be positive".into()));
        }
        let algorithm = match raw.get("algorithm").unwrap_or("columnwise") {
            "columnwise" => Algorithm::Columnwise,
            "pgd" => Algorithm::Pgd,
            v => {
                return Err(CliError::Config(format!(
                    "invalid value for 'algorithm': {v:?}"
                )))
            }
        };
        let sparsity = parse::<usize>(raw, "sparsity_s")?;
        let constraint = match raw.get("constraint").unwrap_or("unconstrained") {
            "unconstrained" => ConstraintSpec::Unconstrained,
            "nonnegative" => ConstraintSpec::Nonnegative,
            "unit_row_norm" => ConstraintSpec::UnitRowNorm,
            "row_sparsity" => ConstraintSpec::RowSparsity(sparsity.ok_or_else(|| {
                CliError::Config("'constraint = row_sparsity' requires 'sparsity_s'".into())
            })?),
            "orthogonal" => ConstraintSpec::Orthogonal,
            v => {
                return Err(CliError::Config(format!(
                    "invalid value for 'constraint': {v:?}"
                )))
            }
        };
        if let ConstraintSpec::RowSparsity(s) = constraint {
            if s == 0 || s > k {
                return Err(CliError::Config(format!(
                    "'sparsity_s' must satisfy 1 <= s <= k = {k}, got {s}"
                )));
            }
        }
        let mut nonneg_columns = parse_bool(raw, "nonneg_columns")?;
        if algorithm == Algorithm::Columnwise {
            match constraint {
                ConstraintSpec::Unconstrained => {}
                ConstraintSpec::Nonnegative => nonneg_columns = true,
                other => {
                    return Err(CliError::Config(format!(
                        "'constraint = {}' is not supported by the columnwise algorithm",
                        other.name()
                    )))
                }
            }
        } else if nonneg_columns {
            return Err(CliError::Config(
                "'nonneg_columns' applies to the columnwise algorithm; use 'constraint = nonnegative' with pgd".into(),
            ));
        }

        let defaults = SolverConfig::default();
        let fixed_step = positive_f64(raw, "fixed_step")?;
        if fixed_step.is_some() && algorithm != Algorithm::Pgd {
            return Err(CliError::Config(
                "'fixed_step' applies to the pgd algorithm".into(),
            ));
        }
        let solver = SolverConfig {
            mu_penalty: positive_f64(raw, "mu")?,
            mu_margin: positive_f64(raw, "mu_margin")?.unwrap_or(defaults.mu_margin),
            max_iter: parse::<usize>(raw, "max_iter")?.unwrap_or(defaults.max_iter),
            rel_tol: positive_f64(raw, "rel_tol")?.unwrap_or(defaults.rel_tol),
            seed: parse::<u64>(raw, "seed")?.unwrap_or(defaults.seed),
            nonneg_columns,
            step: fixed_step.map_or(StepRule::Adaptive, StepRule::Fixed),
        };
        let repeats = parse::<usize>(raw, "repeats")?.unwrap_or(1);
        if repeats == 0 {
            return Err(CliError::Config("'repeats' must be positive".into()));
        }
        if solver.seed.checked_add(repeats as u64 - 1).is_none() {
            return Err(CliError::Config("'seed' + 'repeats' overflows".into()));
        }
        let out = raw
            .get("out")
            .map_or_else(|| PathBuf::from("out"), PathBuf::from);
        Ok(Self {
            input,
            format,
            similarity,
            lambda_reg,
            k,
            algorithm,
            constraint,
            solver,
            out,
            repeats,
            record_time: parse_bool(raw, "record_time")?,
        })
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> {
        let first = self.solver.seed;
        (0..self.repeats as u64).map(move |r| first + r)
    }
}
