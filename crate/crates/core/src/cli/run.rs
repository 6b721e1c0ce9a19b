use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig, InputFormat};
use super::io::{
    labels_to_csv, matrix_to_csv, read_dense_csv, read_features_csv, read_matrix_market,
    trace_to_csv,
};
use super::report::{Report, RunSummary};
use super::CliError;
use crate::clustering::{accuracy, assign_labels, nmi, LabelVector};
use crate::graph::{build_similarity, regularized_target};
use crate::linalg::{DenseMatrix, SymmetricMatrix};
use crate::solver::{
    objective, relative_error, solve_columnwise, solve_pgd, SolveTrace, SolverConfig,
};
use crate::Error;

fn solver_err(seed: u64, e: Error) -> CliError {
    match e {
        Error::NonFinite(_) | Error::Singular(_) | Error::DegenerateRow { .. } => {
            CliError::Numeric(format!("seed {seed}: {e}"))
        }
        Error::InvalidInput(_) | Error::ShapeMismatch { .. } => {
            CliError::Config(format!("seed {seed}: {e}"))
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Loads the similarity matrix and, for features input, the truth labels.
pub fn load_similarity(
    cfg: &ExperimentConfig,
) -> Result<(SymmetricMatrix, Option<LabelVector>), CliError> {
    match cfg.format {
        InputFormat::DenseCsv => Ok((read_dense_csv(&cfg.input)?, None)),
        InputFormat::MatrixMarketSymmetric => Ok((read_matrix_market(&cfg.input)?, None)),
        InputFormat::FeaturesCsv => {
            let data = read_features_csv(&cfg.input)?;
            let a = build_similarity(&data, cfg.similarity).map_err(|e| CliError::Parse {
                path: cfg.input.display().to_string(),
                line: 0,
                message: e.to_string(),
            })?;
            Ok((a, data.truth().cloned()))
        }
    }
}

struct Run {
    seed: u64,
    h: DenseMatrix,
    trace: SolveTrace,
}

fn solve_one(m: &SymmetricMatrix, cfg: &ExperimentConfig, seed: u64) -> Result<Run, CliError> {
    let solver = SolverConfig {
        seed,
        ..cfg.solver.clone()
    };
    let (h, trace) = match cfg.algorithm {
        Algorithm::Columnwise => {
            let (pair, trace) =
                solve_columnwise(m, cfg.k, &solver).map_err(|e| solver_err(seed, e))?;
            (pair.h, trace)
        }
        Algorithm::Pgd => {
            solve_pgd(m, cfg.k, &cfg.constraint, &solver).map_err(|e| solver_err(seed, e))?
        }
    };
    Ok(Run { seed, h, trace })
}

/// Runs every seed, writes the per-seed files and `report.json` into
/// `cfg.out`, and returns the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (a, truth) = load_similarity(cfg)?;
    let n = a.dim();
    if cfg.k > n {
        return Err(CliError::Config(format!(
            "'k' = {} exceeds the number of samples n = {n}",
            cfg.k
        )));
    }
    if let Some(t) = &truth {
        if t.len() != n {
            return Err(CliError::Config(format!(
                "{} truth labels for {n} samples",
                t.len()
            )));
        }
    }
    let target =
        regularized_target(a, cfg.lambda_reg).map_err(|e| CliError::Config(e.to_string()))?;
    let m = &target.m;
    fs::create_dir_all(&cfg.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", cfg.out.display())))?;

    let seeds: Vec<u64> = cfg.seeds().collect();
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let run = solve_one(m, cfg, seed)?;
            let labels = assign_labels(&run.h);
            write(
                &cfg.out.join(format!("trace_{seed}.csv")),
                &trace_to_csv(&run.trace, cfg.record_time),
            )?;
            write(
                &cfg.out.join(format!("H_{seed}.csv")),
                &matrix_to_csv(&run.h),
            )?;
            write(
                &cfg.out.join(format!("labels_{seed}.csv")),
                &labels_to_csv(&labels),
            )?;
            summarize(m, cfg, &run, &labels, truth.as_ref())
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let report = Report {
        algorithm: cfg.algorithm.name(),
        constraint: cfg.constraint.name(),
        n,
        k: cfg.k,
        lambda_reg: cfg.lambda_reg,
        runs,
    };
    let json = report
        .to_json()
        .map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))?;
    write(&cfg.out.join("report.json"), &json)?;
    Ok(report)
}

fn summarize(
    m: &SymmetricMatrix,
    cfg: &ExperimentConfig,
    run: &Run,
    labels: &LabelVector,
    truth: Option<&LabelVector>,
) -> Result<RunSummary, CliError> {
    let seed = run.seed;
    let (ac, nmi) = match truth {
        Some(t) => (
            Some(accuracy(labels, t).map_err(|e| solver_err(seed, e))?.ac),
            Some(nmi(labels, t).map_err(|e| solver_err(seed, e))?),
        ),
        None => (None, None),
    };
    Ok(RunSummary {
        seed,
        final_objective: objective(m, &run.h).map_err(|e| solver_err(seed, e))?,
        final_rel_error: relative_error(m, &run.h).map_err(|e| solver_err(seed, e))?,
        iters: run.trace.iterations(),
        converged: run.trace.converged,
        mu_used: run.trace.mu_used,
        lambda_reg: cfg.lambda_reg,
        ac,
        nmi,
    })
}
