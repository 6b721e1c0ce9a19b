/// One row of a solver trace.
///
/// Row 0 describes the starting point. Row `i > 0` describes the iterate
/// produced by step `i`, together with the quantities used to take it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    /// Split objective for the column-wise solver, `f(H)` for projected gradient.
    pub objective: f64,
    /// `‖M − H Hᵀ‖²_F / ‖M‖²_F`.
    pub rel_error: f64,
    pub stepsize: Option<f64>,
    pub lipschitz: Option<f64>,
    /// `‖H − P‖_F` (column-wise solver).
    pub split_gap: Option<f64>,
    /// `‖∇f‖_F` at the point the step was taken from.
    pub grad_norm: Option<f64>,
    /// `‖H_i − H_{i-1}‖_F`.
    pub step_norm: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    pub records: Vec<TraceRecord>,
    /// `true` when the relative-change rule fired before `max_iter`.
    pub converged: bool,
    /// Splitting penalty actually used (column-wise solver).
    pub mu_used: Option<f64>,
    /// Rows frozen because the unit-norm projection hit a zero row.
    pub frozen_rows: usize,
}

impl SolveTrace {
    pub fn objectives(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.objective).collect()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// Number of steps taken (records minus the starting row).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    /// `true` if every objective is within `slack` of its predecessor or lower.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].objective <= w[0].objective + slack)
    }

    /// First iteration whose relative error is at most `target`.
    pub fn first_below(&self, target: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.rel_error <= target)
            .map(|r| r.iter)
    }
}
