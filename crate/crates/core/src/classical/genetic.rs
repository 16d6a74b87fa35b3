use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, random_mask, repair};
use crate::encoding::ClassicalInfo;
use crate::error::{Error, Result};
use crate::ising::SpinConfig;
use crate::solver::{
    ClassicalObjective, ClassicalSolver, ParamReader, SolverParams, SolverRun, Trace,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1 / n`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 100,
            generations: 200,
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 3,
            elitism_count: 2,
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn from_params(params: &SolverParams) -> Result<Self> {
        let r = ParamReader::new(
            params,
            &[
                "population",
                "generations",
                "crossover_rate",
                "mutation_rate",
                "tournament_size",
                "elitism_count",
            ],
        )?;
        let d = Self::default();
        let p = Self {
            population: r.get("population", d.population)?,
            generations: r.get("generations", d.generations)?,
            crossover_rate: r.get("crossover_rate", d.crossover_rate)?,
            mutation_rate: match params.get("mutation_rate") {
                None => None,
                Some(_) => Some(r.get("mutation_rate", 0.0)?),
            },
            tournament_size: r.get("tournament_size", d.tournament_size)?,
            elitism_count: r.get("elitism_count", d.elitism_count)?,
            seed: d.seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 || !self.population.is_multiple_of(2) {
            return Err(Error::param("population", "must be a positive even number"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::param("crossover_rate", "must lie in [0, 1]"));
        }
        if let Some(m) = self.mutation_rate {
            if !(0.0..=1.0).contains(&m) {
                return Err(Error::param("mutation_rate", "must lie in [0, 1]"));
            }
        }
        if self.tournament_size == 0 || self.tournament_size > self.population {
            return Err(Error::param(
                "tournament_size",
                "must lie in [1, population]",
            ));
        }
        if self.elitism_count > self.population {
            return Err(Error::param("elitism_count", "must not exceed population"));
        }
        Ok(())
    }
}

/// Generational GA with random initial population.
pub fn genetic_algorithm(
    objective: &ClassicalObjective<'_>,
    info: &ClassicalInfo,
    params: &GaParams,
) -> Result<SolverRun> {
    genetic_algorithm_from(objective, info, params, None)
}

/// Generational GA over selection masks: tournament selection, uniform
/// crossover, per-bit mutation, repair of infeasible offspring and elitism.
/// `initial` overrides the random initial population.
pub fn genetic_algorithm_from(
    objective: &ClassicalObjective<'_>,
    info: &ClassicalInfo,
    params: &GaParams,
    initial: Option<Vec<Vec<bool>>>,
) -> Result<SolverRun> {
    params.validate()?;
    let n = info.num_bits;
    if n == 0 {
        return Err(Error::InvalidSpec("no bits to optimize".into()));
    }
    let mutation_rate = params.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut population = match initial {
        Some(p) => {
            if p.len() != params.population || p.iter().any(|c| c.len() != n) {
                return Err(Error::InvalidSpec(
                    "initial population does not match population size or bit count".into(),
                ));
            }
            p
        }
        None => (0..params.population)
            .map(|_| random_mask(n, &mut rng))
            .collect(),
    };
    let mut feasible: Vec<bool> = population
        .iter_mut()
        .map(|c| repair(c, &info.constraint, &mut rng))
        .collect();
    let mut scores = evaluate_all(objective, &population)?;

    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut update_best = |pop: &[Vec<bool>], scores: &[f64], feasible: &[bool]| {
        for ((c, &s), &ok) in pop.iter().zip(scores).zip(feasible) {
            if ok && best.as_ref().is_none_or(|b| s < b.0) {
                best = Some((s, c.clone()));
            }
        }
        best.as_ref().map_or(f64::INFINITY, |b| b.0)
    };
    let mut trace = Trace {
        batch: 0,
        amplitudes: None,
        fitness_raw: Vec::with_capacity(params.generations + 1),
        fitness_best: Vec::with_capacity(params.generations + 1),
    };
    let generation_min = |scores: &[f64]| scores.iter().cloned().fold(f64::INFINITY, f64::min);
    trace
        .fitness_best
        .push(update_best(&population, &scores, &feasible));
    trace.fitness_raw.push(generation_min(&scores));

    for _ in 0..params.generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| {
            feasible[b]
                .cmp(&feasible[a])
                .then(scores[a].total_cmp(&scores[b]))
        });
        let mut next: Vec<Vec<bool>> = order[..params.elitism_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        let mut next_feasible: Vec<bool> = order[..params.elitism_count]
            .iter()
            .map(|&i| feasible[i])
            .collect();

        while next.len() < params.population {
            let a = tournament(&scores, &feasible, params.tournament_size, &mut rng);
            let b = tournament(&scores, &feasible, params.tournament_size, &mut rng);
            let (mut c1, mut c2) = (population[a].clone(), population[b].clone());
            if rng.random::<f64>() < params.crossover_rate {
                for i in 0..n {
                    if rng.random_bool(0.5) {
                        std::mem::swap(&mut c1[i], &mut c2[i]);
                    }
                }
            }
            for child in [c1, c2] {
                if next.len() == params.population {
                    break;
                }
                let mut child = child;
                if mutation_rate > 0.0 {
                    for bit in child.iter_mut() {
                        if rng.random::<f64>() < mutation_rate {
                            *bit = !*bit;
                        }
                    }
                }
                next_feasible.push(repair(&mut child, &info.constraint, &mut rng));
                next.push(child);
            }
        }
        population = next;
        feasible = next_feasible;
        scores = evaluate_all(objective, &population)?;
        trace
            .fitness_best
            .push(update_best(&population, &scores, &feasible));
        trace.fitness_raw.push(generation_min(&scores));
    }

    let (_, mask) =
        best.ok_or_else(|| Error::Evaluation("no feasible selection was found".into()))?;
    Ok(SolverRun {
        spins: SpinConfig::from_mask(&mask),
        traces: vec![trace],
    })
}

fn evaluate_all(objective: &ClassicalObjective<'_>, population: &[Vec<bool>]) -> Result<Vec<f64>> {
    population
        .par_iter()
        .map(|c| evaluate(objective, c))
        .collect()
}

/// Index of the best of `k` uniformly drawn individuals; feasible beats
/// infeasible, then lower score, then earlier draw.
fn tournament<R: Rng>(scores: &[f64], feasible: &[bool], k: usize, rng: &mut R) -> usize {
    let mut winner = rng.random_range(0..scores.len());
    for _ in 1..k {
        let c = rng.random_range(0..scores.len());
        let better = (feasible[c] && !feasible[winner])
            || (feasible[c] == feasible[winner] && scores[c] < scores[winner]);
        if better {
            winner = c;
        }
    }
    winner
}

#[derive(Debug, Clone)]
pub struct GeneticAlgorithm {
    params: GaParams,
}

impl GeneticAlgorithm {
    pub fn new(params: GaParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }
}

impl ClassicalSolver for GeneticAlgorithm {
    fn solve(
        &self,
        objective: &ClassicalObjective<'_>,
        info: &ClassicalInfo,
        seed: u64,
    ) -> Result<SolverRun> {
        let params = GaParams {
            seed,
            ..self.params.clone()
        };
        genetic_algorithm(objective, info, &params)
    }

    fn params(&self) -> serde_json::Value {
        serde_json::to_value(&self.params).unwrap_or_default()
    }
}
