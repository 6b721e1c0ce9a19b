use crate::error::{Error, Result};

/// Feasible set for the projected-gradient solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintSpec {
    Unconstrained,
    /// `H ≥ 0` entrywise.
    Nonnegative,
    /// Every row has unit Euclidean norm.
    UnitRowNorm,
    /// At most `s` nonzeros per row.
    RowSparsity(usize),
    /// `HᵀH = I`.
    Orthogonal,
}

impl ConstraintSpec {
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        match *self {
            ConstraintSpec::RowSparsity(s) if s == 0 || s > k => Err(Error::InvalidInput(format!(
                "row sparsity s must satisfy 1 <= s <= k = {k}, got {s}"
            ))),
            ConstraintSpec::Orthogonal if n < k => Err(Error::InvalidInput(format!(
                "orthogonality constraint needs n >= k, got n = {n}, k = {k}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstraintSpec::Unconstrained => "unconstrained",
            ConstraintSpec::Nonnegative => "nonnegative",
            ConstraintSpec::UnitRowNorm => "unit_row_norm",
            ConstraintSpec::RowSparsity(_) => "row_sparsity",
            ConstraintSpec::Orthogonal => "orthogonal",
        }
    }
}

/// Stepsize rule of the projected-gradient solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `t = 1 / (2 L_i)` with `L_i` re-estimated at every iterate.
    Adaptive,
    /// Constant `t`, for comparisons against the adaptive rule.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Splitting penalty `μ`; derived from the safe lower bound when `None`.
    pub mu_penalty: Option<f64>,
    /// Multiplier applied to the lower bound when `mu_penalty` is `None`.
    pub mu_margin: f64,
    pub max_iter: usize,
    /// Stop once `|f_{k-1} - f_k| <= rel_tol * (1 + f_0)`.
    pub rel_tol: f64,
    pub seed: u64,
    /// Clamp each column update at zero (column-wise solver only).
    pub nonneg_columns: bool,
    pub step: StepRule,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu_penalty: None,
            mu_margin: 1.01,
            max_iter: 1000,
            rel_tol: 1e-8,
            seed: 0,
            nonneg_columns: false,
            step: StepRule::Adaptive,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(mu) = self.mu_penalty {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "mu_penalty must be > 0, got {mu}"
                )));
            }
        }
        if !(self.mu_margin > 1.0 && self.mu_margin.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mu_margin must be > 1, got {}",
                self.mu_margin
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be >= 1".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if let StepRule::Fixed(t) = self.step {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "fixed stepsize must be > 0, got {t}"
                )));
            }
        }
        Ok(())
    }
}
