//! Solver interfaces, the solver registry and the solve-and-decode step
//! shared by every front end.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cim::{Cim, CimParams};
use crate::classical::{BruteForce, GaParams, GeneticAlgorithm, SaParams, SimulatedAnnealing};
use crate::encoding::{ClassicalInfo, Problem};
use crate::error::{Error, Result};
use crate::ising::{spins_to_selection, IsingModel, Selection, SpinConfig, TestSuite};

/// Per-step (or per-iteration) record of one trajectory.
///
/// `fitness_raw` is the value of the configuration visited at that step and
/// `fitness_best` the best value seen so far. `amplitudes` is only filled by
/// solvers with continuous state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub batch: usize,
    pub amplitudes: Option<Vec<Vec<f64>>>,
    pub fitness_raw: Vec<f64>,
    pub fitness_best: Vec<f64>,
}

/// What a solver hands back before decoding.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub spins: SpinConfig,
    pub traces: Vec<Trace>,
}

/// A decoded solver outcome.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub solver: String,
    pub seed: u64,
    pub spins: SpinConfig,
    pub selection: Selection,
    pub fitness: f64,
    /// Total energy (offset included) under the problem's Ising encoding.
    pub energy: f64,
    pub runtime_ms: f64,
    pub params: serde_json::Value,
    pub traces: Vec<Trace>,
}

pub type ClassicalObjective<'a> = dyn Fn(&[bool]) -> Result<f64> + Sync + 'a;

/// Solvers that consume an Ising model and return spins.
pub trait IsingSolver: Send + Sync {
    fn solve(&self, model: &IsingModel, seed: u64) -> Result<SolverRun>;
    fn params(&self) -> serde_json::Value;
}

/// Solvers that minimize an objective over selection masks.
pub trait ClassicalSolver: Send + Sync {
    fn solve(
        &self,
        objective: &ClassicalObjective<'_>,
        info: &ClassicalInfo,
        seed: u64,
    ) -> Result<SolverRun>;
    fn params(&self) -> serde_json::Value;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverFamily {
    Ising,
    Classical,
}

pub enum SolverInstance {
    Ising(Box<dyn IsingSolver>),
    Classical(Box<dyn ClassicalSolver>),
}

impl SolverInstance {
    pub fn family(&self) -> SolverFamily {
        match self {
            SolverInstance::Ising(_) => SolverFamily::Ising,
            SolverInstance::Classical(_) => SolverFamily::Classical,
        }
    }

    pub fn params(&self) -> serde_json::Value {
        match self {
            SolverInstance::Ising(s) => s.params(),
            SolverInstance::Classical(s) => s.params(),
        }
    }
}

/// Raw `key → value` overrides for one solver.
pub type SolverParams = BTreeMap<String, String>;

/// Reads typed values out of [`SolverParams`], rejecting unknown keys.
pub struct ParamReader<'a> {
    params: &'a SolverParams,
    known: &'static [&'static str],
}

impl<'a> ParamReader<'a> {
    pub fn new(params: &'a SolverParams, known: &'static [&'static str]) -> Result<Self> {
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::param(
                k,
                format!(
                    "unknown solver parameter; expected one of {}",
                    known.join(", ")
                ),
            ));
        }
        Ok(Self { params, known })
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        debug_assert!(self.known.contains(&key));
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::param(key, format!("cannot parse `{v}`"))),
        }
    }
}

type IsingFactory = Arc<dyn Fn(&SolverParams) -> Result<Box<dyn IsingSolver>> + Send + Sync>;
type ClassicalFactory =
    Arc<dyn Fn(&SolverParams) -> Result<Box<dyn ClassicalSolver>> + Send + Sync>;

#[derive(Clone)]
pub enum SolverFactory {
    Ising(IsingFactory),
    Classical(ClassicalFactory),
}

impl SolverFactory {
    pub fn family(&self) -> SolverFamily {
        match self {
            SolverFactory::Ising(_) => SolverFamily::Ising,
            SolverFactory::Classical(_) => SolverFamily::Classical,
        }
    }

    pub fn build(&self, params: &SolverParams) -> Result<SolverInstance> {
        Ok(match self {
            SolverFactory::Ising(f) => SolverInstance::Ising(f(params)?),
            SolverFactory::Classical(f) => SolverInstance::Classical(f(params)?),
        })
    }
}

#[derive(Clone, Default)]
pub struct SolverRegistry {
    entries: BTreeMap<String, SolverFactory>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding `CIM`, `BruteForce`, `SA` and `GA`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        let builtins = [
            (
                "CIM",
                SolverFactory::Ising(Arc::new(|p: &SolverParams| {
                    Ok(Box::new(Cim::new(CimParams::from_params(p)?)?) as Box<dyn IsingSolver>)
                })),
            ),
            (
                "BruteForce",
                SolverFactory::Ising(Arc::new(|p: &SolverParams| {
                    Ok(Box::new(BruteForce::from_params(p)?) as Box<dyn IsingSolver>)
                })),
            ),
            (
                "SA",
                SolverFactory::Classical(Arc::new(|p: &SolverParams| {
                    Ok(
                        Box::new(SimulatedAnnealing::new(SaParams::from_params(p)?)?)
                            as Box<dyn ClassicalSolver>,
                    )
                })),
            ),
            (
                "GA",
                SolverFactory::Classical(Arc::new(|p: &SolverParams| {
                    Ok(Box::new(GeneticAlgorithm::new(GaParams::from_params(p)?)?)
                        as Box<dyn ClassicalSolver>)
                })),
            ),
        ];
        for (name, f) in builtins {
            reg.register(name, f).expect("built-in names are distinct");
        }
        reg
    }

    pub fn register(&mut self, name: &str, factory: SolverFactory) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::DuplicateRegistration {
                what: "solver",
                name: name.to_string(),
            });
        }
        self.entries.insert(name.to_string(), factory);
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<&SolverFactory> {
        self.entries.get(name).ok_or_else(|| Error::UnknownName {
            what: "solver",
            name: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }
}

/// Runs one solver on one problem and decodes the outcome.
///
/// Ising-family solvers receive `model`; classical-family solvers receive
/// the problem's classical objective and [`ClassicalInfo`]. The returned
/// fitness is the problem's own fitness of the decoded spins, and the
/// energy is the total energy of those spins under `model`.
pub fn run_solver(
    name: &str,
    solver: &SolverInstance,
    problem: &dyn Problem,
    model: &IsingModel,
    suite: &TestSuite,
    seed: u64,
) -> Result<SolverResult> {
    let start = Instant::now();
    let run = match solver {
        SolverInstance::Ising(s) => s.solve(model, seed)?,
        SolverInstance::Classical(s) => {
            let info = problem.classical_info();
            let objective = |mask: &[bool]| problem.classical_objective(mask);
            s.solve(&objective, &info, seed)?
        }
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let selection = spins_to_selection(suite, &run.spins)?;
    let mut params = solver.params();
    if let Some(slot) = params.get_mut("seed") {
        *slot = seed.into();
    }
    Ok(SolverResult {
        solver: name.to_string(),
        seed,
        fitness: problem.fitness(&run.spins)?,
        energy: model.total_energy(&run.spins)?,
        selection,
        spins: run.spins,
        runtime_ms,
        params,
        traces: run.traces,
    })
}
