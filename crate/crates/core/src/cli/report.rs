//! `report.json`, the per-seed summary of an experiment.
//!
//! Layout (see `configs/report.schema.json`):
//!
//! ```text
//! { "algorithm", "constraint", "n", "k", "lambda_reg",
//!   "runs": [ { "seed", "final_objective", "final_rel_error", "iters",
//!               "converged", "mu_used", "lambda_reg", "ac"?, "nmi"? } ] }
//! ```
//!
//! `ac` and `nmi` are present only when the input carries truth labels;
//! `mu_used` is `null` for the projected-gradient solver.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::io::fmt_f64;

fn num<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(S::Error::custom(format!("non-finite value {x} in report")));
    }
    RawValue::from_string(fmt_f64(*x))
        .map_err(S::Error::custom)?
        .serialize(s)
}

fn opt_num<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => num(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    /// `‖M − HHᵀ‖²_F` at the returned factor.
    #[serde(serialize_with = "num")]
    pub final_objective: f64,
    #[serde(serialize_with = "num")]
    pub final_rel_error: f64,
    pub iters: usize,
    pub converged: bool,
    #[serde(serialize_with = "opt_num")]
    pub mu_used: Option<f64>,
    #[serde(serialize_with = "num")]
    pub lambda_reg: f64,
    #[serde(serialize_with = "opt_num", skip_serializing_if = "Option::is_none")]
    pub ac: Option<f64>,
    #[serde(serialize_with = "opt_num", skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub algorithm: &'static str,
    pub constraint: &'static str,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "num")]
    pub lambda_reg: f64,
    pub runs: Vec<RunSummary>,
}

impl Report {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|mut s| {
            s.push('\n');
            s
        })
    }
}
