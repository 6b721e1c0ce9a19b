//! Acceptance suite. Runs every criterion at its pinned tolerance and time
//! budget, prints one line each, and exits non-zero if any fails.

mod common;

use std::fmt::Write as _;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use rand::Rng;
use symfact::clustering::{accuracy, assign_labels, nmi, LabelVector};
use symfact::graph::{
    build_similarity, laplacian_quadratic_form, pairwise_smoothness, regularized_target, Similarity,
};
use symfact::linalg::{
    extreme_eigenvalues, jacobi_eigh, SymmetricMatrix, POWER_MAX_ITER, POWER_TOL,
};
use symfact::solver::{
    gradient, is_feasible, objective, solve_columnwise, solve_pgd, ConstraintSpec, SolverConfig,
    StepRule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

const CRITERIA: [Criterion; 13] = [
    (1, "gradient vs central differences", 2.0, gradient_check),
    (2, "monotone objective traces", 20.0, monotone_traces),
    (3, "sufficient decrease per step", 5.0, sufficient_decrease),
    (
        4,
        "split collapse above penalty bound",
        10.0,
        split_collapse,
    ),
    (
        5,
        "regularized objective equivalence",
        1.0,
        objective_equivalence,
    ),
    (6, "pairwise smoothness identity", 1.0, smoothness_identity),
    (7, "exact-rank recovery", 15.0, exact_rank_recovery),
    (8, "convergence-speed ordering", 20.0, speed_ordering),
    (9, "regularization benefit", 30.0, regularization_benefit),
    (10, "gradient-mapping rate", 5.0, gradient_rate),
    (11, "metric oracles", 5.0, metric_oracles),
    (12, "eigen-solver cross-check", 5.0, eigen_cross_check),
    (13, "CLI determinism and contracts", 5.0, cli_contracts),
];

fn main() {
    let mut failed = 0;
    let total = Instant::now();
    for (id, name, budget, run) in CRITERIA {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        let in_time = secs <= budget;
        let ok = pass && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name}: {detail} [{secs:.2}s of {budget}s{}]",
            if ok { "PASS" } else { "FAIL" },
            if in_time { "" } else { ", over budget" },
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn gradient_check() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = r.gen_range(1..=20);
        let k = r.gen_range(1..=5);
        let m = random_symmetric(&mut r, n);
        let h = random_dense(&mut r, n, k);
        let g = gradient(&m, &h).unwrap();
        let mut diff = 0.0;
        for i in 0..n {
            for j in 0..k {
                let step = 1e-5 * h[(i, j)].abs().max(1.0);
                let mut hp = h.clone();
                hp[(i, j)] += step;
                let mut hm = h.clone();
                hm[(i, j)] -= step;
                let fd = (objective(&m, &hp).unwrap() - objective(&m, &hm).unwrap()) / (2.0 * step);
                diff += (fd - g[(i, j)]).powi(2);
            }
        }
        worst = worst.max(diff.sqrt() / g.frobenius_norm());
    }
    outcome(
        worst <= 1e-5,
        format!("worst relative error {worst:.2e} (limit 1e-5)"),
    )
}

fn monotone_instance(seed: u64) -> SymmetricMatrix {
    if seed.is_multiple_of(2) {
        random_symmetric(&mut rng(seed), 50)
    } else {
        noisy_planted(seed, 50, 4, 1.0, 0.1)
    }
}

fn monotone_traces() -> Outcome {
    let constraints = [
        ConstraintSpec::Unconstrained,
        ConstraintSpec::Nonnegative,
        ConstraintSpec::UnitRowNorm,
        ConstraintSpec::RowSparsity(2),
        ConstraintSpec::Orthogonal,
    ];
    let mut failures = Vec::new();
    let mut runs = 0;
    for seed in 0..20 {
        let m = monotone_instance(seed);
        let cfg = SolverConfig {
            seed,
            max_iter: 200,
            rel_tol: 1e-12,
            ..SolverConfig::default()
        };
        for nonneg in [false, true] {
            let c = SolverConfig {
                nonneg_columns: nonneg,
                ..cfg.clone()
            };
            let (_, t) = solve_columnwise(&m, 4, &c).unwrap();
            runs += 1;
            if !t.is_monotone(1e-9 * (1.0 + t.records[0].objective)) {
                failures.push(format!("columnwise nonneg={nonneg} seed {seed}"));
            }
        }
        for c in &constraints {
            let (h, t) = solve_pgd(&m, 4, c, &cfg).unwrap();
            runs += 1;
            if !t.is_monotone(1e-9 * (1.0 + t.records[0].objective)) {
                failures.push(format!("pgd {} seed {seed}", c.name()));
            }
            if !is_feasible(&h, c, 1e-8) {
                failures.push(format!("pgd {} seed {seed} infeasible", c.name()));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{runs} runs, violations: {failures:?}"),
    )
}

fn sufficient_decrease() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut steps = 0;
    for seed in 0..10u64 {
        let m = if seed.is_multiple_of(2) {
            random_symmetric(&mut rng(seed), 30)
        } else {
            noisy_planted(seed, 30, 3, 1.0, 0.1)
        };
        let cfg = SolverConfig {
            seed,
            max_iter: 500,
            rel_tol: 1e-14,
            ..SolverConfig::default()
        };
        let (_, t) = solve_pgd(&m, 3, &ConstraintSpec::Unconstrained, &cfg).unwrap();
        let scale = 1.0 + t.records[0].objective;
        for w in t.records.windows(2) {
            let l = w[1].lipschitz.unwrap();
            let dh = w[1].step_norm.unwrap();
            let margin = (w[0].objective - w[1].objective) - 0.5 * l * dh * dh + 1e-9 * scale;
            worst = worst.min(margin / scale);
            steps += 1;
        }
    }
    outcome(
        worst >= 0.0,
        format!("{steps} steps, smallest scaled margin {worst:.2e} (must be >= 0)"),
    )
}

fn split_collapse() -> Outcome {
    let mut worst_gap: f64 = 0.0;
    let mut worst_grad: f64 = 0.0;
    let mut all_converged = true;
    for seed in 0..10u64 {
        let m = random_symmetric(&mut rng(seed), 40);
        let cfg = SolverConfig {
            seed,
            mu_margin: 1.01,
            rel_tol: 1e-15,
            max_iter: 20000,
            ..SolverConfig::default()
        };
        let (pair, t) = solve_columnwise(&m, 3, &cfg).unwrap();
        all_converged &= t.converged;
        let gap = pair.split_gap() / (1e-6 * (1.0 + pair.h.frobenius_norm()));
        let grad =
            gradient(&m, &pair.h).unwrap().frobenius_norm() / (1e-4 * (1.0 + m.frobenius_norm()));
        worst_gap = worst_gap.max(gap);
        worst_grad = worst_grad.max(grad);
    }
    outcome(
        all_converged && worst_gap <= 1.0 && worst_grad <= 1.0,
        format!(
            "converged={all_converged}, worst gap {worst_gap:.2e} and gradient {worst_grad:.2e} of their limits"
        ),
    )
}

fn objective_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut r = rng(5);
    let n = 20;
    let a = random_symmetric(&mut r, n);
    let l = laplacian_oracle(&a);
    for lambda in [0.1, 1.0, 10.0] {
        let target = regularized_target(a.clone(), lambda).unwrap();
        let mut diffs = Vec::new();
        let mut scale: f64 = 0.0;
        for _ in 0..10 {
            let h = random_dense(&mut r, n, 3);
            let f_reg = objective_oracle(&a, &h) + 2.0 * lambda * trace_htlh_oracle(&l, &h);
            let f_m = objective(&target.m, &h).unwrap();
            scale = scale.max(f_reg.abs()).max(f_m.abs());
            diffs.push(f_reg - f_m);
        }
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
        worst = worst.max(var / (scale * scale));
    }
    outcome(
        worst <= 1e-14,
        format!("worst relative variance {worst:.2e} (limit 1e-14)"),
    )
}

fn smoothness_identity() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = r.gen_range(2..=25);
        let k = r.gen_range(1..=5);
        let a = random_symmetric(&mut r, n);
        let h = random_dense(&mut r, n, k);
        let mut lhs_oracle = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d: f64 = (0..k).map(|t| (h[(i, t)] - h[(j, t)]).powi(2)).sum();
                lhs_oracle += a[(i, j)] * d;
            }
        }
        let rhs_oracle = 2.0 * trace_htlh_oracle(&laplacian_oracle(&a), &h);
        let target = regularized_target(a.clone(), 0.0).unwrap();
        let lhs = pairwise_smoothness(&a, &h);
        let rhs = 2.0 * laplacian_quadratic_form(&target.l, &h);
        let scale = lhs_oracle
            .abs()
            .max(rhs_oracle.abs())
            .max(f64::MIN_POSITIVE);
        for (x, y) in [(lhs, rhs), (lhs, lhs_oracle), (rhs, rhs_oracle)] {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    outcome(
        worst <= 1e-8,
        format!("worst relative difference {worst:.2e} (limit 1e-8)"),
    )
}

fn exact_rank_recovery() -> Outcome {
    let m = planted(1, 60, 3);
    let cfg = SolverConfig {
        seed: 0,
        rel_tol: f64::MIN_POSITIVE,
        ..SolverConfig::default()
    };
    let (_, t1) = solve_columnwise(
        &m,
        3,
        &SolverConfig {
            max_iter: 500,
            ..cfg.clone()
        },
    )
    .unwrap();
    let (_, t2) = solve_pgd(
        &m,
        3,
        &ConstraintSpec::Unconstrained,
        &SolverConfig {
            max_iter: 5000,
            ..cfg
        },
    )
    .unwrap();
    let a = t1.first_below(1e-8);
    let b = t2.first_below(1e-6);
    outcome(
        a.is_some() && b.is_some(),
        format!(
            "columnwise E <= 1e-8 at sweep {a:?} (final {:.1e}), pgd E <= 1e-6 at iteration {b:?} (final {:.1e})",
            t1.last().unwrap().rel_error,
            t2.last().unwrap().rel_error
        ),
    )
}

fn speed_ordering() -> Outcome {
    let m = noisy_planted(0, 100, 5, 0.1, 0.005);
    let base = SolverConfig {
        seed: 0,
        rel_tol: 1e-14,
        max_iter: 20000,
        ..SolverConfig::default()
    };
    let (_, adaptive) = solve_pgd(&m, 5, &ConstraintSpec::Unconstrained, &base).unwrap();
    let target = 1.01 * adaptive.last().unwrap().rel_error;
    let fixed_cfg = SolverConfig {
        step: StepRule::Fixed(1e-3),
        rel_tol: f64::MIN_POSITIVE,
        ..base.clone()
    };
    let (_, fixed) = solve_pgd(&m, 5, &ConstraintSpec::Unconstrained, &fixed_cfg).unwrap();
    let (_, alg1) = solve_columnwise(&m, 5, &base).unwrap();
    let it_adaptive = adaptive.first_below(target);
    let it_fixed = fixed.first_below(target);
    let it_alg1 = alg1.first_below(target);
    let pass = match (it_alg1, it_adaptive, it_fixed) {
        (Some(a1), Some(ad), Some(fx)) => a1 < fx && 2 * ad <= fx,
        _ => false,
    };
    outcome(
        pass,
        format!(
            "target E {target:.4e}: columnwise {it_alg1:?} sweeps, adaptive {it_adaptive:?}, fixed t=1e-3 {it_fixed:?} iterations"
        ),
    )
}

fn regularization_benefit() -> Outcome {
    let mut medians = Vec::new();
    for lambda in [0.0, 0.1, 1.0] {
        let mut acs = Vec::new();
        for seed in 0..10u64 {
            let data = blobs(50, 1.0, 100 + seed);
            let a = build_similarity(&data, Similarity::Rbf { sigma: 0.5 }).unwrap();
            let target = regularized_target(a, lambda).unwrap();
            let cfg = SolverConfig {
                seed,
                max_iter: 500,
                rel_tol: 1e-10,
                ..SolverConfig::default()
            };
            let (pair, _) = solve_columnwise(&target.m, 3, &cfg).unwrap();
            let labels = assign_labels(&pair.h);
            acs.push(accuracy(&labels, data.truth().unwrap()).unwrap().ac);
        }
        medians.push(median(acs));
    }
    let best = medians[1].max(medians[2]);
    outcome(
        medians[0] <= 0.9 && best >= medians[0],
        format!(
            "median AC: lambda=0 {:.3}, lambda=0.1 {:.3}, lambda=1 {:.3}",
            medians[0], medians[1], medians[2]
        ),
    )
}

fn gradient_rate() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let m = if seed.is_multiple_of(2) {
            random_symmetric(&mut rng(100 + seed), 30)
        } else {
            noisy_planted(100 + seed, 30, 3, 1.0, 0.1)
        };
        let cfg = SolverConfig {
            seed,
            max_iter: 300,
            rel_tol: 1e-14,
            ..SolverConfig::default()
        };
        let (_, t) = solve_pgd(&m, 3, &ConstraintSpec::Unconstrained, &cfg).unwrap();
        let l_hat = t.records[1..]
            .iter()
            .filter_map(|r| r.lipschitz)
            .fold(0.0, f64::max);
        let f0 = t.records[0].objective;
        let mut best = f64::INFINITY;
        for (step, r) in t.records[1..].iter().enumerate() {
            best = best.min(r.grad_norm.unwrap().powi(2));
            let bound = 18.0 * l_hat * f0 / (step + 1) as f64;
            worst = worst.max(best / bound);
        }
    }
    outcome(
        worst <= 1.0,
        format!("largest ratio of min squared gradient to bound {worst:.2e} (limit 1)"),
    )
}

fn metric_oracles() -> Outcome {
    let mut r = rng(11);
    let mut problems = Vec::new();
    for case in 0..100 {
        let n = r.gen_range(1..=20);
        let kp = r.gen_range(1..=6);
        let kt = r.gen_range(1..=6);
        let pred: Vec<usize> = (0..n).map(|_| r.gen_range(0..kp)).collect();
        let truth: Vec<usize> = (0..n).map(|_| r.gen_range(0..kt)).collect();
        let lp = LabelVector::new(pred.clone()).unwrap();
        let lt = LabelVector::new(truth.clone()).unwrap();
        let ac = accuracy(&lp, &lt).unwrap().ac;
        let brute = brute_force_matches(&pred, &truth) as f64 / n as f64;
        if ac != brute {
            problems.push(format!("case {case}: ac {ac} vs brute force {brute}"));
        }
        let ab = nmi(&lp, &lt).unwrap();
        let ba = nmi(&lt, &lp).unwrap();
        let oracle = nmi_oracle(&pred, &truth);
        if !(0.0..=1.0).contains(&ab) || (ab - ba).abs() > 1e-12 || (ab - oracle).abs() > 1e-12 {
            problems.push(format!("case {case}: nmi {ab} / {ba} vs oracle {oracle}"));
        }
    }
    let lv = |v: &[usize]| LabelVector::new(v.to_vec()).unwrap();
    let same = nmi(&lv(&[0, 1, 2, 0, 1]), &lv(&[0, 1, 2, 0, 1])).unwrap();
    let constant = nmi(&lv(&[0, 0, 0, 0]), &lv(&[0, 0, 1, 1])).unwrap();
    let independent = nmi(&lv(&[0, 0, 1, 1]), &lv(&[0, 1, 0, 1])).unwrap();
    let example_ac = accuracy(&lv(&[0, 0, 1, 1, 1]), &lv(&[0, 1, 1, 1, 0]))
        .unwrap()
        .ac;
    if same != 1.0 || constant != 0.0 || independent != 0.0 || example_ac != 0.6 {
        problems.push(format!(
            "examples: identical {same}, constant {constant}, independent {independent}, ac {example_ac}"
        ));
    }
    outcome(
        problems.is_empty(),
        format!("100 random pairs plus tagged examples, problems: {problems:?}"),
    )
}

fn eigen_cross_check() -> Outcome {
    let mut r = rng(12);
    let mut worst: f64 = 0.0;
    let mut unconverged = 0;
    for _ in 0..50 {
        let n = r.gen_range(1..=30);
        let s = random_symmetric(&mut r, n);
        let est = extreme_eigenvalues(&s, POWER_TOL, POWER_MAX_ITER).unwrap();
        let exact = jacobi_eigh(&s).unwrap();
        let (hi, lo) = (exact.values[0], exact.values[n - 1]);
        if !est.converged {
            unconverged += 1;
        }
        worst = worst
            .max((est.lambda_max - hi).abs() / hi.abs().max(1.0))
            .max((est.lambda_min - lo).abs() / lo.abs().max(1.0));
    }
    outcome(
        worst <= 1e-6 && unconverged == 0,
        format!("worst scaled error {worst:.2e} (limit 1e-6), unconverged {unconverged}"),
    )
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_symfact"))
        .args(args)
        .output()
        .expect("cannot launch symfact")
}

fn cli_contracts() -> Outcome {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).display().to_string();
    let mut notes = String::new();
    let mut pass = true;

    let conf = format!("{root}/planted_columnwise.conf");
    let (o1, o2) = (out("run1"), out("run2"));
    let s1 = run_cli(&["--config", &conf, "--out", &o1]);
    let s2 = run_cli(&["--config", &conf, "--out", &o2]);
    let identical = s1.status.code() == Some(0)
        && s2.status.code() == Some(0)
        && ["trace_0.csv", "trace_1.csv"]
            .iter()
            .all(|f| fs::read(format!("{o1}/{f}")).ok() == fs::read(format!("{o2}/{f}")).ok());
    let trace = fs::read_to_string(format!("{o1}/trace_0.csv")).unwrap_or_default();
    let objectives: Vec<f64> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let monotone = !objectives.is_empty() && objectives.windows(2).all(|w| w[1] <= w[0]);
    pass &= identical && monotone;
    let _ = write!(
        notes,
        "rerun identical={identical}, trace non-increasing={monotone}; "
    );

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,0,0\n0,1,0\n0,1\n").unwrap();
    let s = run_cli(&[
        "--input",
        bad.to_str().unwrap(),
        "--k",
        "1",
        "--out",
        &out("bad"),
    ]);
    let stderr = String::from_utf8_lossy(&s.stderr);
    let parse_ok = s.status.code() == Some(3) && stderr.contains("line 3");
    pass &= parse_ok;
    let _ = write!(
        notes,
        "malformed input exit {:?} line named={parse_ok}; ",
        s.status.code()
    );

    let data = blobs(10, 0.5, 7);
    let a = build_similarity(&data, Similarity::InnerProduct).unwrap();
    let feats = dir.path().join("feats.csv");
    let mut text = String::from("x,y,label\n");
    for i in 0..data.len() {
        let row = data.features().row(i);
        let _ = writeln!(
            text,
            "{:.16e},{:.16e},{}",
            row[0],
            row[1],
            data.truth().unwrap().as_slice()[i]
        );
    }
    fs::write(&feats, text).unwrap();
    let dense = dir.path().join("a.csv");
    fs::write(&dense, symfact::cli::matrix_to_csv(&a)).unwrap();
    let common = [
        "--k",
        "3",
        "--lambda-reg",
        "0",
        "--seed",
        "3",
        "--max-iter",
        "200",
    ];
    let (of, od) = (out("features"), out("dense"));
    let f = run_cli(
        &[
            &[
                "--input",
                feats.to_str().unwrap(),
                "--format",
                "features_csv",
                "--out",
                &of,
            ][..],
            &common,
        ]
        .concat(),
    );
    let d = run_cli(
        &[
            &["--input", dense.to_str().unwrap(), "--out", &od][..],
            &common,
        ]
        .concat(),
    );
    let same_series = f.status.code() == Some(0)
        && d.status.code() == Some(0)
        && fs::read(format!("{of}/trace_3.csv")).ok() == fs::read(format!("{od}/trace_3.csv")).ok();
    pass &= same_series;
    let _ = write!(
        notes,
        "features vs precomputed traces identical={same_series}"
    );
    outcome(pass, notes)
}
