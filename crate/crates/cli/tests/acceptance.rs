//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.
//!
//! Expected values come from the oracles below, which recompute fitness
//! straight from the attribute columns and enumerate every selection. They
//! share no code with the encoder or the solvers.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcs_ising::bench::{load_csv, write_csv};
use tcs_ising::cim::{Cim, CimParams};
use tcs_ising::classical::brute_force;
use tcs_ising::encoding::budget_target;
use tcs_ising::solver::{SolverInstance, SolverParams};
use tcs_ising::{
    run_solver, AttributeKind, AttributeRole, IsingModel, Problem, ProblemSpec, SolverRegistry,
    SpinConfig, Strategy, TestSuite, WeightedAttributeProblem,
};
use tcs_ising_cli::ResultEntry;

const SAMPLE: &str = ",time,rate\n0,39050.0,0.13383838383838384\n1,1000.0,0.09620253164556962\n";

// ---------------------------------------------------------------- oracle

#[derive(Debug, Clone)]
struct Instance {
    strategy: Strategy,
    /// One column per attribute.
    columns: Vec<Vec<f64>>,
    kinds: Vec<AttributeKind>,
    weights: Vec<f64>,
    minimization: bool,
    min_weight: Option<f64>,
    budget_percent: Option<f64>,
}

impl Instance {
    fn n(&self) -> usize {
        self.columns[0].len()
    }

    fn names(&self) -> Vec<String> {
        (0..self.columns.len()).map(|k| format!("a{k}")).collect()
    }

    fn problem(&self) -> WeightedAttributeProblem {
        let names = self.names();
        let cols: Vec<(&str, &[f64])> = names
            .iter()
            .zip(&self.columns)
            .map(|(n, c)| (n.as_str(), c.as_slice()))
            .collect();
        let suite = TestSuite::from_columns(&cols).unwrap();
        let roles = names
            .iter()
            .zip(&self.kinds)
            .zip(&self.weights)
            .map(|((name, kind), w)| match kind {
                AttributeKind::Effectiveness => AttributeRole::effectiveness(name, *w),
                AttributeKind::Cost => AttributeRole::cost(name, *w),
            })
            .collect();
        let spec = ProblemSpec::new(
            self.strategy,
            roles,
            self.minimization,
            self.min_weight,
            self.budget_percent,
            None,
        )
        .unwrap();
        WeightedAttributeProblem::new(spec, suite).unwrap()
    }

    fn budget(&self) -> Option<usize> {
        self.budget_percent
            .map(|p| ((p / 100.0 * self.n() as f64).round() as usize).min(self.n()))
    }

    /// Fitness of a selection mask, computed from the definitions.
    fn oracle_fitness(&self, mask: &[bool]) -> f64 {
        let n = self.n();
        let mut columns = self.columns.clone();
        let mut kinds = self.kinds.clone();
        let mut weights = self.weights.clone();
        if self.minimization {
            let mean = weights.iter().sum::<f64>() / weights.len() as f64;
            columns.push(vec![1.0; n]);
            kinds.push(AttributeKind::Cost);
            weights.push(self.min_weight.unwrap_or(mean));
        }
        let total: f64 = weights.iter().sum();
        let mut fv = 0.0;
        for ((col, kind), w) in columns.iter().zip(&kinds).zip(&weights) {
            let omega = w / total;
            let sum: f64 = col.iter().sum();
            let picked: f64 = col
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(c, _)| c)
                .sum();
            fv += match self.strategy {
                Strategy::WaoD => {
                    let target = if *kind == AttributeKind::Effectiveness {
                        1.0
                    } else {
                        0.0
                    };
                    omega * (picked / sum - target).powi(2)
                }
                Strategy::WaoR | Strategy::WaoRBudget => {
                    // spin sum: unselected +1, selected -1
                    let signed: f64 = col
                        .iter()
                        .zip(mask)
                        .map(|(c, &m)| if m { -c } else { *c })
                        .sum();
                    let lambda = if *kind == AttributeKind::Effectiveness {
                        1.0
                    } else {
                        -1.0
                    };
                    let f = 0.5 * (1.0 + lambda * signed / sum);
                    omega * f * f
                }
            };
        }
        if let Some(b) = self.budget() {
            let count = mask.iter().filter(|&&m| m).count() as f64;
            fv += (count - b as f64).powi(2);
        }
        fv
    }
}

fn mask_of(rank: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| rank >> i & 1 == 1).collect()
}

fn spins_of(mask: &[bool]) -> SpinConfig {
    SpinConfig::new(mask.iter().map(|&m| if m { -1 } else { 1 }).collect()).unwrap()
}

/// Plain double loop over the full coupling matrix.
fn oracle_energy(model: &IsingModel, mask: &[bool]) -> f64 {
    let s: Vec<f64> = mask.iter().map(|&m| if m { -1.0 } else { 1.0 }).collect();
    let n = s.len();
    let mut e = model.offset();
    for i in 0..n {
        e -= model.h()[i] * s[i];
        for j in 0..n {
            if i != j {
                e -= 0.5 * model.coupling(i, j) * s[i] * s[j];
            }
        }
    }
    e
}

struct Extremes {
    min: f64,
    max: f64,
    argmin: Vec<Vec<bool>>,
}

fn enumerate(n: usize, f: impl Fn(&[bool]) -> f64) -> Extremes {
    let values: Vec<(Vec<bool>, f64)> = (0..1u64 << n)
        .map(|r| {
            let m = mask_of(r, n);
            let v = f(&m);
            (m, v)
        })
        .collect();
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-9 * min.abs().max(1.0);
    let argmin = values
        .into_iter()
        .filter(|v| v.1 <= min + tol)
        .map(|v| v.0)
        .collect();
    Extremes { min, max, argmin }
}

fn random_instance(rng: &mut ChaCha8Rng, strategy: Strategy, n: usize) -> Instance {
    let m = rng.random_range(1..=3);
    let columns = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| 100.0 - rng.random_range(0.0..100.0))
                .collect()
        })
        .collect();
    let kinds = (0..m)
        .map(|_| {
            if rng.random_bool(0.5) {
                AttributeKind::Effectiveness
            } else {
                AttributeKind::Cost
            }
        })
        .collect();
    let weights = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
    let minimization = rng.random_bool(0.5);
    let min_weight = (minimization && rng.random_bool(0.5)).then(|| rng.random_range(0.05..1.0));
    let budget_percent =
        (strategy == Strategy::WaoRBudget).then(|| 100.0 - rng.random_range(0.0..100.0));
    Instance {
        strategy,
        columns,
        kinds,
        weights,
        minimization,
        min_weight,
        budget_percent,
    }
}

fn instances_200() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    let strategies = [Strategy::WaoR, Strategy::WaoD, Strategy::WaoRBudget];
    (0..200)
        .map(|i| {
            let n = rng.random_range(2..=12);
            random_instance(&mut rng, strategies[i % 3], n)
        })
        .collect()
}

fn builtin(name: &str) -> SolverInstance {
    SolverRegistry::with_builtins()
        .resolve(name)
        .unwrap()
        .build(&SolverParams::new())
        .unwrap()
}

fn tol(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

// -------------------------------------------------------------- criteria

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut vectors = 0u64;
    for (k, inst) in instances_200().iter().enumerate() {
        let problem = inst.problem();
        let model = problem.ising().unwrap();
        let n = inst.n();
        for r in 0..1u64 << n {
            let mask = mask_of(r, n);
            let fv = inst.oracle_fitness(&mask);
            let lib_fv = problem.fitness(&spins_of(&mask)).unwrap();
            let energy = model.total_energy(&spins_of(&mask)).unwrap();
            let err = (energy - fv)
                .abs()
                .max((lib_fv - fv).abs())
                .max((oracle_energy(&model, &mask) - fv).abs());
            if err > tol(fv) {
                return Err(format!("instance {k} ({}), mask {mask:?}: fitness {fv}, energy {energy}, library fitness {lib_fv}", inst.strategy));
            }
            worst = worst.max(err / fv.abs().max(1.0));
            vectors += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(60),
        format!("200 instances, {vectors} spin vectors, worst relative error {worst:.2e}, {elapsed:.1?}"),
    )
}

fn c2_dominance() -> Outcome {
    let start = Instant::now();
    let solvers = [
        ("CIM", builtin("CIM")),
        ("SA", builtin("SA")),
        ("GA", builtin("GA")),
    ];
    let (mut eligible, mut sa_hits, mut ga_hits) = (0, 0, 0);
    for (k, inst) in instances_200().iter().enumerate() {
        let problem = inst.problem();
        let model = problem.ising().unwrap();
        let suite = problem.suite().clone();
        let oracle = enumerate(inst.n(), |m| inst.oracle_fitness(m));
        let (bf_spins, bf_energy) = brute_force(&model, 25).unwrap();
        if (bf_energy - oracle.min).abs() > tol(oracle.min) {
            return Err(format!(
                "instance {k}: brute force {bf_energy} vs enumerated minimum {}",
                oracle.min
            ));
        }
        if !oracle.argmin.contains(&bf_spins.to_mask()) {
            return Err(format!(
                "instance {k}: brute-force argmin not among enumerated minimizers"
            ));
        }
        let wao_r_small = inst.strategy == Strategy::WaoR && inst.n() <= 10;
        eligible += wao_r_small as usize;
        for (name, solver) in &solvers {
            let r = run_solver(name, solver, &problem, &model, &suite, k as u64).unwrap();
            if r.energy < bf_energy - tol(bf_energy) {
                return Err(format!(
                    "instance {k}: {name} energy {} below brute-force minimum {bf_energy}",
                    r.energy
                ));
            }
            if wao_r_small && (r.fitness - oracle.min).abs() <= tol(oracle.min) {
                match *name {
                    "SA" => sa_hits += 1,
                    "GA" => ga_hits += 1,
                    _ => {}
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let need = (0.9 * eligible as f64).ceil() as usize;
    check(
        sa_hits >= need && ga_hits >= need && elapsed < Duration::from_secs(300),
        format!("no solver below the optimum on 200 instances; WAOr n<=10 optimum hits SA {sa_hits}/{eligible}, GA {ga_hits}/{eligible} (need {need}), {elapsed:.1?}"),
    )
}

fn c3_cim_quality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3_000);
    let cim = builtin("CIM");
    let mut good = 0;
    let mut gaps = Vec::new();
    for k in 0..50 {
        let inst = random_instance(&mut rng, Strategy::WaoR, 12);
        let problem = inst.problem();
        let model = problem.ising().unwrap();
        let ex = enumerate(12, |m| oracle_energy(&model, m));
        let r = run_solver("CIM", &cim, &problem, &model, problem.suite(), k).unwrap();
        let gap = if ex.max > ex.min {
            (r.energy - ex.min) / (ex.max - ex.min)
        } else {
            0.0
        };
        gaps.push(gap);
        good += (gap <= 0.05) as usize;
    }
    let elapsed = start.elapsed();
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    check(
        good >= 40 && elapsed < Duration::from_secs(600),
        format!("{good}/50 instances within 0.05 of the optimum (need 40), worst gap {worst:.4}, {elapsed:.1?}"),
    )
}

fn c4_cim_physics() -> Outcome {
    let params = CimParams {
        noise_scale: 0.0,
        pump_end_factor: 3.0,
        steps: 10_000,
        batches: 1,
        ..Default::default()
    };
    let target = ((params.pump_end() - 1.0 - params.j) / params.g2).sqrt();
    let out = Cim::new(params)
        .unwrap()
        .with_initial_amplitude(1e-3)
        .with_traces(false)
        .solve(&IsingModel::zeros(3))
        .unwrap();
    let mus = &out.final_states[0].mu;
    let pitchfork = mus
        .iter()
        .all(|mu| (mu.abs() - target).abs() <= 0.1 * target);

    let mut ferro = IsingModel::zeros(2);
    ferro.set_coupling(0, 1, 1.0);
    let mut aligned = 0;
    for seed in 0..100 {
        let out = Cim::new(CimParams {
            batches: 1,
            seed,
            ..Default::default()
        })
        .unwrap()
        .with_traces(false)
        .solve(&ferro)
        .unwrap();
        let mu = &out.final_states[0].mu;
        aligned += (mu[0].signum() == mu[1].signum()) as usize;
    }
    check(
        pitchfork && aligned >= 90,
        format!("uncoupled |mu| {mus:.3?} vs target {target:.3} (10%); ferromagnet aligned {aligned}/100 (need 90)"),
    )
}

fn c5_budget() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5_000);
    let (sa, ga, cim, bf) = (
        builtin("SA"),
        builtin("GA"),
        builtin("CIM"),
        builtin("BruteForce"),
    );
    let (mut cim_exact, mut bf_checked) = (0, 0);
    for k in 0..50u64 {
        let n = rng.random_range(4..=12);
        let b = rng.random_range(1..n);
        let mut inst = random_instance(&mut rng, Strategy::WaoRBudget, n);
        inst.budget_percent = Some(100.0 * b as f64 / n as f64);
        assert_eq!(budget_target(inst.budget_percent.unwrap(), n), b);
        let problem = inst.problem();
        let model = problem.ising().unwrap();
        let suite = problem.suite();
        for (name, solver) in [("SA", &sa), ("GA", &ga)] {
            let r = run_solver(name, solver, &problem, &model, suite, k).unwrap();
            if r.selection.count() > b {
                return Err(format!(
                    "instance {k}: {name} selected {} > B = {b}",
                    r.selection.count()
                ));
            }
        }
        cim_exact += (run_solver("CIM", &cim, &problem, &model, suite, k)
            .unwrap()
            .selection
            .count()
            == b) as usize;
        let oracle = enumerate(n, |m| inst.oracle_fitness(m));
        let zero_penalty_optimum = oracle
            .argmin
            .iter()
            .any(|m| m.iter().filter(|&&x| x).count() == b);
        if zero_penalty_optimum {
            bf_checked += 1;
            let r = run_solver("BruteForce", &bf, &problem, &model, suite, k).unwrap();
            if r.selection.count() != b {
                return Err(format!(
                    "instance {k}: brute force selected {} != B = {b}",
                    r.selection.count()
                ));
            }
        }
    }
    check(
        cim_exact >= 35,
        format!("SA/GA always within budget; CIM count == B on {cim_exact}/50 (need 35); brute force exact on {bf_checked}/{bf_checked} instances with a zero-penalty optimum"),
    )
}

fn strip_runtime(json: &str) -> String {
    json.lines()
        .filter(|l| !l.trim_start().starts_with("\"runtime_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_listing(workdir: &Path, dataset: &Path, save: &str) -> Result<Duration, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tcs-ising"))
        .current_dir(workdir)
        .args(["test", "--problem", "WAOr", "--dataset"])
        .arg(dataset)
        .args([
            "--problem-param",
            "effectiveness=['rate']",
            "cost=['time']",
            "minimization=true",
            "--solver",
            "CIM",
            "--solver",
            "GA",
            "--save-path",
            save,
            "--convergence-curve",
            "spins_amplitude",
            "fitness_value",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(start.elapsed())
}

fn verify_outputs(save: &Path, columns: &[Vec<f64>]) -> Result<(), String> {
    let text = std::fs::read_to_string(save.join("results.json")).map_err(|e| e.to_string())?;
    let entries: Vec<ResultEntry> =
        serde_json::from_str(&text).map_err(|e| format!("schema: {e}"))?;
    let solvers: Vec<&str> = entries.iter().map(|e| e.solver.as_str()).collect();
    if solvers != ["CIM", "GA"] {
        return Err(format!("unexpected solver entries {solvers:?}"));
    }
    let n = columns[0].len();
    let inst = Instance {
        strategy: Strategy::WaoR,
        columns: columns.to_vec(),
        kinds: vec![AttributeKind::Effectiveness, AttributeKind::Cost],
        weights: vec![1.0, 1.0],
        minimization: true,
        min_weight: None,
        budget_percent: None,
    };
    let ids: BTreeSet<String> = (0..n).map(|i| i.to_string()).collect();
    for e in &entries {
        if e.problem != "WAOr"
            || e.spins.len() != n
            || !e.fitness.is_finite()
            || !e.runtime_ms.is_finite()
            || !e.params.is_object()
        {
            return Err(format!("{}: malformed entry", e.solver));
        }
        if !e.selected_ids.iter().all(|id| ids.contains(id)) {
            return Err(format!(
                "{}: selected ids {:?} outside the suite",
                e.solver, e.selected_ids
            ));
        }
        let mask: Vec<bool> = e.spins.iter().map(|&s| s == -1).collect();
        let expected_ids: Vec<String> =
            (0..n).filter(|&i| mask[i]).map(|i| i.to_string()).collect();
        if expected_ids != e.selected_ids {
            return Err(format!("{}: selected_ids disagree with spins", e.solver));
        }
        let fv = inst.oracle_fitness(&mask);
        if (fv - e.fitness).abs() > tol(fv) || (e.energy - e.fitness).abs() > tol(fv) {
            return Err(format!(
                "{}: fitness {} energy {} vs recomputed {fv}",
                e.solver, e.fitness, e.energy
            ));
        }
    }
    let conv = save.join("convergence");
    let mut required = vec![];
    for b in 0..10 {
        required.push(conv.join(format!("CIM_seed0/convergence_spins_amplitude_batch{b}")));
        required.push(conv.join(format!("CIM_seed0/convergence_fitness_value_batch{b}")));
    }
    required.push(conv.join("GA_seed0/convergence_fitness_value_batch0"));
    for stem in required {
        for ext in ["csv", "svg"] {
            let p = stem.with_extension(ext);
            if !p.is_file() {
                return Err(format!("missing {}", p.display()));
            }
        }
    }
    let amp =
        std::fs::read_to_string(conv.join("CIM_seed0/convergence_spins_amplitude_batch0.csv"))
            .unwrap();
    if amp.lines().count() != 1002 || amp.lines().next().unwrap().split(',').count() != n + 1 {
        return Err("amplitude CSV has the wrong shape".into());
    }
    let svg =
        std::fs::read_to_string(conv.join("CIM_seed0/convergence_spins_amplitude_batch0.svg"))
            .unwrap();
    if svg.matches("<polyline").count() != n {
        return Err("amplitude SVG should have one polyline per spin".into());
    }
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(save.join("comparison.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    if report["methods"].as_array().map(Vec::len) != Some(2)
        || !save.join("comparison.svg").is_file()
    {
        return Err("comparison report incomplete".into());
    }
    Ok(())
}

fn e2e_case(rows: &str, columns: &[Vec<f64>], limit: Duration) -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dataset = dir.path().join("paintcontrol.csv");
    std::fs::write(&dataset, rows).unwrap();
    let t1 = run_listing(dir.path(), &dataset, "./results")?;
    verify_outputs(&dir.path().join("results"), columns)?;
    let t2 = run_listing(dir.path(), &dataset, "./again")?;
    let a = std::fs::read_to_string(dir.path().join("results/results.json")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("again/results.json")).unwrap();
    if strip_runtime(&a) != strip_runtime(&b) {
        return Err("results.json differs between identical runs".into());
    }
    if t1 > limit || t2 > limit {
        return Err(format!("too slow: {t1:.1?} / {t2:.1?} (limit {limit:?})"));
    }
    Ok(format!("{t1:.1?}"))
}

fn c6_cli() -> Outcome {
    let sample_cols = vec![
        vec![0.13383838383838384, 0.09620253164556962],
        vec![39050.0, 1000.0],
    ];
    let small = e2e_case(SAMPLE, &sample_cols, Duration::from_secs(60))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6_000);
    let mut rows = String::from(",time,rate\n");
    let (mut rate, mut time) = (Vec::new(), Vec::new());
    for i in 0..100 {
        let t = (rng.random_range(100..60_000) as f64).max(1.0);
        let r = rng.random_range(0.0..1.0f64).max(1e-3);
        rows.push_str(&format!("{i},{t:?},{r:?}\n"));
        time.push(t);
        rate.push(r);
    }
    let large = e2e_case(&rows, &[rate, time], Duration::from_secs(300))?;
    Ok(format!("listing exits 0, outputs complete, results.json reproducible; 2 rows {small}, 100 rows {large}"))
}

fn c7_toy() -> Outcome {
    let suite =
        TestSuite::from_columns(&[("rate", &[2.0, 1.0, 1.0]), ("time", &[1.0, 1.0, 2.0])]).unwrap();
    let inst = Instance {
        strategy: Strategy::WaoR,
        columns: vec![vec![2.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]],
        kinds: vec![AttributeKind::Effectiveness, AttributeKind::Cost],
        weights: vec![1.0, 1.0],
        minimization: false,
        min_weight: None,
        budget_percent: None,
    };
    let oracle = enumerate(3, |m| inst.oracle_fitness(m));
    let expected_argmin = vec![vec![true, false, false], vec![true, true, false]];
    let mut argmin = oracle.argmin.clone();
    argmin.sort();
    let mut want = expected_argmin.clone();
    want.sort();
    if oracle.min != 0.15625 || argmin != want {
        return Err(format!(
            "oracle minimum {} at {:?}",
            oracle.min, oracle.argmin
        ));
    }
    let spec = ProblemSpec::new(
        Strategy::WaoR,
        vec![
            AttributeRole::effectiveness("rate", 1.0),
            AttributeRole::cost("time", 1.0),
        ],
        false,
        None,
        None,
        None,
    )
    .unwrap();
    let problem = WeightedAttributeProblem::new(spec, suite.clone()).unwrap();
    let model = problem.ising().unwrap();
    let mut found = Vec::new();
    for name in ["BruteForce", "CIM", "SA", "GA"] {
        let r = run_solver(name, &builtin(name), &problem, &model, &suite, 0).unwrap();
        if (r.fitness - 0.15625).abs() > 1e-12 || !expected_argmin.contains(&r.selection.mask) {
            return Err(format!(
                "{name}: fitness {} selection {:?}",
                r.fitness, r.selection.selected_ids
            ));
        }
        found.push(format!("{name} {:?}", r.selection.selected_ids));
    }
    Ok(format!(
        "minimum 0.15625 at {{0}} and {{0,1}}; {}",
        found.join(", ")
    ))
}

fn c8_csv() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paintcontrol.csv");
    std::fs::write(&path, SAMPLE).unwrap();
    let suite = load_csv(&path).map_err(|e| e.to_string())?;
    let rate = suite.column("rate").unwrap();
    let time = suite.column("time").unwrap();
    let exact = rate[0].to_bits() == 0.13383838383838384f64.to_bits()
        && rate[1].to_bits() == 0.09620253164556962f64.to_bits()
        && time == [39050.0, 1000.0];
    let ids: Vec<&str> = suite.ids().collect();
    let copy = dir.path().join("copy.csv");
    write_csv(&suite, &copy).map_err(|e| e.to_string())?;
    let back = load_csv(&copy).map_err(|e| e.to_string())?;
    let bits = |s: &TestSuite| -> Vec<Vec<u64>> {
        s.cases()
            .iter()
            .map(|c| c.values.iter().map(|v| v.to_bits()).collect())
            .collect()
    };
    let round_trip = bits(&suite) == bits(&back)
        && back.ids().collect::<Vec<_>>() == ids
        && back.attribute_names() == suite.attribute_names();
    check(
        exact && ids == ["0", "1"] && round_trip,
        format!(
            "rate[0] = {:?}, round trip bit-identical: {round_trip}",
            rate[0]
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 fitness/Ising equivalence", c1_equivalence),
        ("2 brute-force dominance", c2_dominance),
        ("3 CIM quality", c3_cim_quality),
        ("4 CIM physics", c4_cim_physics),
        ("5 budget feasibility", c5_budget),
        ("6 end-to-end CLI", c6_cli),
        ("7 toy ground truth", c7_toy),
        ("8 CSV fidelity", c8_csv),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
