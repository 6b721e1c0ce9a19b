use std::time::Instant;

use super::config::{ConstraintSpec, SolverConfig, StepRule};
use super::init::initial_factor;
use super::objective::{gradient, lipschitz_constant_warm, objective};
use super::projection::project_tracked;
use super::trace::{SolveTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, EigenWarmStart, SymmetricMatrix};

/// Projected gradient descent on `‖M − HHᵀ‖²_F` over the set `c`.
///
/// Each step is `H⁺ = P(H − t ∇f(H))` with `t = 1/(2 L_i)` and `L_i`
/// re-estimated at the current iterate, unless `cfg.step` fixes `t`. The
/// seeded start is projected once so every iterate is feasible. Under a
/// fixed step no Lipschitz estimate is computed and the trace leaves it empty.
pub fn solve_pgd(
    m: &SymmetricMatrix,
    k: usize,
    c: &ConstraintSpec,
    cfg: &SolverConfig,
) -> Result<(DenseMatrix, SolveTrace)> {
    cfg.validate()?;
    let n = m.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "rank k must satisfy 1 <= k <= n = {n}, got {k}"
        )));
    }
    c.validate(n, k)?;

    let raw = initial_factor(m, k, cfg.seed)?;
    let first = project_tracked(&raw, c, raw.clone())?;
    let mut h = first.h;
    let mut trace = SolveTrace {
        frozen_rows: first.frozen_rows,
        ..SolveTrace::default()
    };
    let m_scale = m.frobenius_norm_sq();
    let rel = |f: f64| if m_scale > 0.0 { f / m_scale } else { f };

    let f0 = objective(m, &h)?;
    let mut f = f0;
    trace.records.push(TraceRecord {
        iter: 0,
        objective: f0,
        rel_error: rel(f0),
        stepsize: None,
        lipschitz: None,
        split_gap: None,
        grad_norm: None,
        step_norm: None,
        wall_ms: 0.0,
    });

    let mut warm = EigenWarmStart::default();
    for iter in 1..=cfg.max_iter {
        let clock = Instant::now();
        let g = gradient(m, &h)?;
        let grad_norm = g.frobenius_norm();
        let (t, lipschitz) = match cfg.step {
            StepRule::Adaptive => {
                let lipschitz = lipschitz_constant_warm(m, &h, &mut warm)?;
                if lipschitz == 0.0 {
                    if grad_norm == 0.0 {
                        trace.converged = true;
                        break;
                    }
                    return Err(Error::NonFinite(format!(
                        "zero Lipschitz estimate with nonzero gradient at iteration {iter}"
                    )));
                }
                (1.0 / (2.0 * lipschitz), Some(lipschitz))
            }
            StepRule::Fixed(t) => (t, None),
        };
        let mut stepped = h.clone();
        stepped.axpy(-t, &g);
        if !stepped.is_finite() {
            return Err(Error::NonFinite(format!(
                "gradient step overflowed at iteration {iter}"
            )));
        }
        let projected = project_tracked(&h, c, stepped)?;
        trace.frozen_rows += projected.frozen_rows;
        let h_next = projected.h;
        let f_next = objective(m, &h_next)?;
        if !f_next.is_finite() {
            return Err(Error::NonFinite(format!(
                "objective is not finite at iteration {iter}"
            )));
        }
        trace.records.push(TraceRecord {
            iter,
            objective: f_next,
            rel_error: rel(f_next),
            stepsize: Some(t),
            lipschitz,
            split_gap: None,
            grad_norm: Some(grad_norm),
            step_norm: Some(h_next.sub(&h).frobenius_norm()),
            wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        });
        h = h_next;
        let done = (f - f_next).abs() <= cfg.rel_tol * (1.0 + f0);
        f = f_next;
        if done {
            trace.converged = true;
            break;
        }
    }
    Ok((h, trace))
}
