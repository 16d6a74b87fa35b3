use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate, random_mask, repair};
use crate::encoding::ClassicalInfo;
use crate::error::{Error, Result};
use crate::ising::SpinConfig;
use crate::solver::{
    ClassicalObjective, ClassicalSolver, ParamReader, SolverParams, SolverRun, Trace,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub t0: f64,
    /// Geometric cooling factor applied every iteration.
    pub cooling: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            t0: 1.0,
            cooling: 0.995,
            iterations: 20_000,
            seed: 0,
        }
    }
}

impl SaParams {
    pub fn from_params(params: &SolverParams) -> Result<Self> {
        let r = ParamReader::new(params, &["t0", "cooling", "iterations"])?;
        let d = Self::default();
        let p = Self {
            t0: r.get("t0", d.t0)?,
            cooling: r.get("cooling", d.cooling)?,
            iterations: r.get("iterations", d.iterations)?,
            seed: d.seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return Err(Error::param("t0", "must be positive"));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::param("cooling", "must lie in (0, 1)"));
        }
        if self.iterations == 0 {
            return Err(Error::param("iterations", "must be positive"));
        }
        Ok(())
    }
}

/// Single-bit-flip Metropolis annealing over selection masks.
///
/// Neighbours that violate the constraint are repaired before evaluation.
/// The trace holds the current and best-seen objective per iteration.
pub fn simulated_annealing(
    objective: &ClassicalObjective<'_>,
    info: &ClassicalInfo,
    params: &SaParams,
) -> Result<SolverRun> {
    params.validate()?;
    let n = info.num_bits;
    if n == 0 {
        return Err(Error::InvalidSpec("no bits to optimize".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut current = random_mask(n, &mut rng);
    let feasible = repair(&mut current, &info.constraint, &mut rng);
    let mut current_value = evaluate(objective, &current)?;
    let mut best = feasible.then(|| (current_value, current.clone()));

    let mut trace = Trace {
        batch: 0,
        amplitudes: None,
        fitness_raw: Vec::with_capacity(params.iterations),
        fitness_best: Vec::with_capacity(params.iterations),
    };
    let mut temperature = params.t0;
    for _ in 0..params.iterations {
        let mut candidate = current.clone();
        let i = rng.random_range(0..n);
        candidate[i] = !candidate[i];
        if repair(&mut candidate, &info.constraint, &mut rng) {
            let value = evaluate(objective, &candidate)?;
            let delta = value - current_value;
            if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
                current = candidate;
                current_value = value;
                if best.as_ref().is_none_or(|b| value < b.0) {
                    best = Some((value, current.clone()));
                }
            }
        }
        temperature *= params.cooling;
        trace.fitness_raw.push(current_value);
        trace
            .fitness_best
            .push(best.as_ref().map_or(f64::INFINITY, |b| b.0));
    }
    let (_, mask) =
        best.ok_or_else(|| Error::Evaluation("no feasible selection was found".into()))?;
    Ok(SolverRun {
        spins: SpinConfig::from_mask(&mask),
        traces: vec![trace],
    })
}

#[derive(Debug, Clone)]
pub struct SimulatedAnnealing {
    params: SaParams,
}

impl SimulatedAnnealing {
    pub fn new(params: SaParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }
}

impl ClassicalSolver for SimulatedAnnealing {
    fn solve(
        &self,
        objective: &ClassicalObjective<'_>,
        info: &ClassicalInfo,
        seed: u64,
    ) -> Result<SolverRun> {
        let params = SaParams {
            seed,
            ..self.params.clone()
        };
        simulated_annealing(objective, info, &params)
    }

    fn params(&self) -> serde_json::Value {
        serde_json::to_value(&self.params).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::Constraint;

    #[test]
    fn constant_objective() {
        let info = ClassicalInfo::unconstrained(5);
        let run = simulated_annealing(&|_: &[bool]| Ok(3.5), &info, &SaParams::default()).unwrap();
        assert_eq!(run.spins.len(), 5);
        assert_eq!(*run.traces[0].fitness_best.last().unwrap(), 3.5);
    }

    #[test]
    fn single_bit_prefers_selected() {
        let info = ClassicalInfo::unconstrained(1);
        let obj = |m: &[bool]| Ok(if m[0] { 0.0 } else { 1.0 });
        let run = simulated_annealing(&obj, &info, &SaParams::default()).unwrap();
        assert_eq!(run.spins.as_slice(), [-1]);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let info = ClassicalInfo::unconstrained(3);
        let err = simulated_annealing(&|_: &[bool]| Ok(f64::NAN), &info, &SaParams::default());
        assert!(matches!(err, Err(Error::Evaluation(_))));
    }

    #[test]
    fn respects_budget_and_best_is_monotone() {
        let info = ClassicalInfo {
            constraint: Constraint::MaxSelected(2),
            ..ClassicalInfo::unconstrained(8)
        };
        // rewards selecting as many as possible
        let obj = |m: &[bool]| Ok(-(m.iter().filter(|&&x| x).count() as f64));
        let params = SaParams {
            iterations: 2000,
            ..Default::default()
        };
        for seed in 0..5 {
            let run = simulated_annealing(
                &obj,
                &info,
                &SaParams {
                    seed,
                    ..params.clone()
                },
            )
            .unwrap();
            assert_eq!(run.spins.count_selected(), 2);
            assert!(run.traces[0].fitness_best.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let info = ClassicalInfo::unconstrained(6);
        let obj = |m: &[bool]| {
            Ok(m.iter()
                .enumerate()
                .map(|(i, &b)| {
                    if b {
                        (i as f64 - 2.5).powi(2) - 3.0
                    } else {
                        0.0
                    }
                })
                .sum())
        };
        let p = SaParams {
            seed: 4,
            iterations: 500,
            ..Default::default()
        };
        let a = simulated_annealing(&obj, &info, &p).unwrap();
        let b = simulated_annealing(&obj, &info, &p).unwrap();
        assert_eq!(a.spins, b.spins);
        assert_eq!(a.traces, b.traces);
    }
}
