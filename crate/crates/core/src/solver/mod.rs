//! Solvers for `min_H ‖M − HHᵀ‖²_F`.

mod columnwise;
mod config;
mod init;
mod objective;
mod pgd;
mod projection;
mod trace;

pub use columnwise::{
    column_update, penalty_lower_bound, solve_columnwise, ColumnwiseSolver, FactorPair,
};
pub use config::{ConstraintSpec, SolverConfig, StepRule};
pub use init::initial_factor;
pub use objective::{
    gradient, gradient_mapping_norm, lipschitz_constant, lipschitz_constant_warm, objective,
    relative_error, split_objective,
};
pub use pgd::solve_pgd;
pub use projection::{is_feasible, project, project_tracked, Projection};
pub use trace::{SolveTrace, TraceRecord};
