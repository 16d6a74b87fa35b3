//! Measurement-feedback coherent Ising machine, simulated with a Gaussian
//! (mean + variance) approximation of each oscillator.
//!
//! Each spin is an oscillator with mean amplitude `μ`, amplitude variance
//! `σ` and a homogeneity-control gain `e`. The pump `p` ramps linearly from
//! zero to `pump_end_factor · (1 + j)`, crossing the oscillation threshold
//! `1 + j` part way through the run. Above threshold each gain `e` steers
//! `μ²` towards the target `A = (p - 1 - j) / g2`. Couplings enter through
//! the measured amplitudes `μ̃ = μ + noise · W / √(4j)`.
//!
//! Per Euler–Maruyama step, with `g = p - 1 - j` and one normal draw `W` per
//! oscillator:
//!
//! ```text
//! I  = e · (Σ_j J̃_ij μ̃_j + h̃_i √A)
//! μ' = μ + dt·(g μ - g2 μ³ + c·I) + √dt · √j · (2σ - 1) · noise · W
//! σ' = σ + dt·(2 g σ - 6 g2 μ² σ - 2 j (σ - ½)² + 1 + j + 2 g2 μ²)
//! e' = clamp(e - dt · β (μ² - A) / max(A, 1) · e, 1e-6, 1e6)
//! ```
//!
//! All three updates read the pre-step state. The sign of `μ` is read out at
//! every step and the lowest-energy readout across steps and batches is
//! returned.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::solver::{IsingSolver, ParamReader, SolverParams, SolverRun, Trace};

const GAIN_MIN: f64 = 1e-6;
const GAIN_MAX: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CimParams {
    /// Saturation strength.
    pub g2: f64,
    /// Feedback coupling vs. coupling-induced dissipation.
    pub j: f64,
    /// Homogeneity correction strength.
    pub beta: f64,
    /// Multiplier on the stochastic term.
    pub noise_scale: f64,
    pub steps: usize,
    pub dt: f64,
    /// Independent trajectories per solve.
    pub batches: usize,
    pub seed: u64,
    /// Final pump as a multiple of the threshold `1 + j`.
    pub pump_end_factor: f64,
    pub coupling_strength: f64,
}

impl Default for CimParams {
    fn default() -> Self {
        Self {
            g2: 1e-3,
            j: 2.0,
            beta: 10.0,
            noise_scale: 1.0,
            steps: 1000,
            dt: 2e-3,
            batches: 10,
            seed: 0,
            pump_end_factor: 1.5,
            coupling_strength: 1.0,
        }
    }
}

const CIM_KEYS: &[&str] = &[
    "g2",
    "j",
    "beta",
    "noise_scale",
    "steps",
    "dt",
    "batches",
    "pump_end_factor",
    "coupling_strength",
];

impl CimParams {
    pub fn from_params(params: &SolverParams) -> Result<Self> {
        let r = ParamReader::new(params, CIM_KEYS)?;
        let d = Self::default();
        let p = Self {
            g2: r.get("g2", d.g2)?,
            j: r.get("j", d.j)?,
            beta: r.get("beta", d.beta)?,
            noise_scale: r.get("noise_scale", d.noise_scale)?,
            steps: r.get("steps", d.steps)?,
            dt: r.get("dt", d.dt)?,
            batches: r.get("batches", d.batches)?,
            seed: d.seed,
            pump_end_factor: r.get("pump_end_factor", d.pump_end_factor)?,
            coupling_strength: r.get("coupling_strength", d.coupling_strength)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("g2", self.g2),
            ("j", self.j),
            ("dt", self.dt),
            ("coupling_strength", self.coupling_strength),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(k, format!("must be positive, got {v}")));
            }
        }
        for (k, v) in [("beta", self.beta), ("noise_scale", self.noise_scale)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(k, format!("must be non-negative, got {v}")));
            }
        }
        if !(self.pump_end_factor.is_finite() && self.pump_end_factor > 1.0) {
            return Err(Error::param("pump_end_factor", "must exceed 1"));
        }
        if self.steps == 0 {
            return Err(Error::param("steps", "must be positive"));
        }
        if self.batches == 0 {
            return Err(Error::param("batches", "must be positive"));
        }
        Ok(())
    }

    pub fn pump_end(&self) -> f64 {
        self.pump_end_factor * (1.0 + self.j)
    }

    /// Uncoupled fixed-point amplitude `√((p_end - 1 - j) / g2)`.
    pub fn saturation_amplitude(&self) -> f64 {
        ((self.pump_end() - 1.0 - self.j).max(0.0) / self.g2).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub err: Vec<f64>,
}

impl OscillatorState {
    /// Vacuum state with every mean amplitude set to `mu0`.
    pub fn vacuum(n: usize, mu0: f64) -> Self {
        Self {
            mu: vec![mu0; n],
            sigma: vec![0.5; n],
            err: vec![1.0; n],
        }
    }
}

/// Amplitude and readout history of one batch.
pub type CimTrace = Trace;

/// `h` and `J` divided by `max_i (|h_i| + Σ_j |J_ij|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCoupling {
    pub h: Vec<f64>,
    pub j: Vec<f64>,
    pub scale: f64,
}

pub fn normalize_coupling(model: &IsingModel) -> NormalizedCoupling {
    let n = model.n();
    let scale = (0..n)
        .map(|i| model.h()[i].abs() + model.j_row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return NormalizedCoupling {
            h: model.h().to_vec(),
            j: model.j_matrix().to_vec(),
            scale: 1.0,
        };
    }
    NormalizedCoupling {
        h: model.h().iter().map(|v| v / scale).collect(),
        j: model.j_matrix().iter().map(|v| v / scale).collect(),
        scale,
    }
}

#[derive(Debug, Clone)]
pub struct CimOutcome {
    pub spins: SpinConfig,
    pub total_energy: f64,
    pub batch: usize,
    pub step: usize,
    pub traces: Vec<CimTrace>,
    pub final_states: Vec<OscillatorState>,
    /// Largest variance reached by any oscillator in any batch.
    pub peak_sigma: f64,
}

/// A configured simulator.
#[derive(Debug, Clone)]
pub struct Cim {
    params: CimParams,
    initial_amplitude: f64,
    record_traces: bool,
}

impl Cim {
    pub fn new(params: CimParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            initial_amplitude: 0.0,
            record_traces: true,
        })
    }

    pub fn params(&self) -> &CimParams {
        &self.params
    }

    /// Starts every oscillator at `mu0` instead of zero.
    pub fn with_initial_amplitude(mut self, mu0: f64) -> Self {
        self.initial_amplitude = mu0;
        self
    }

    pub fn with_traces(mut self, record: bool) -> Self {
        self.record_traces = record;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.params.seed = seed;
        self
    }

    pub fn solve(&self, model: &IsingModel) -> Result<CimOutcome> {
        let n = model.n();
        if n == 0 {
            return Err(Error::InvalidModel("model has no spins".into()));
        }
        let coupling = normalize_coupling(model);
        let runs: Vec<Result<BatchRun>> = (0..self.params.batches)
            .into_par_iter()
            .map(|b| self.run_batch(model, &coupling, b))
            .collect();
        let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

        // Lowest energy; ties go to the earliest step, then the lowest batch.
        let best = runs
            .iter()
            .min_by(|a, b| {
                a.best_energy
                    .total_cmp(&b.best_energy)
                    .then(a.best_step.cmp(&b.best_step))
                    .then(a.batch.cmp(&b.batch))
            })
            .expect("at least one batch");
        let (spins, total_energy, batch, step) = (
            best.best_spins.clone(),
            best.best_energy,
            best.batch,
            best.best_step,
        );
        let mut traces = Vec::new();
        let mut final_states = Vec::with_capacity(runs.len());
        let peak_sigma = runs.iter().map(|r| r.peak_sigma).fold(0.0, f64::max);
        for r in runs {
            traces.extend(r.trace);
            final_states.push(r.state);
        }
        Ok(CimOutcome {
            spins,
            total_energy,
            batch,
            step,
            traces,
            final_states,
            peak_sigma,
        })
    }

    fn run_batch(
        &self,
        model: &IsingModel,
        coupling: &NormalizedCoupling,
        batch: usize,
    ) -> Result<BatchRun> {
        let p = &self.params;
        let n = model.n();
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_add(batch as u64));
        let mut state = OscillatorState::vacuum(n, self.initial_amplitude);
        let mut next = state.clone();
        let mut noise = vec![0.0; n];
        let mut measured = vec![0.0; n];

        let sqrt_j = p.j.sqrt();
        let sqrt_dt = p.dt.sqrt();
        let meas_scale = p.noise_scale / (4.0 * p.j).sqrt();
        let pump_end = p.pump_end();

        let readout = SpinConfig::from_signs(&state.mu);
        let mut best_energy = model.total_energy(&readout)?;
        let mut best_spins = readout;
        let mut best_step = 0;
        let mut peak_sigma = 0.5f64;

        let mut trace = self.record_traces.then(|| Trace {
            batch,
            amplitudes: Some(Vec::with_capacity(p.steps + 1)),
            fitness_raw: Vec::with_capacity(p.steps + 1),
            fitness_best: Vec::with_capacity(p.steps + 1),
        });
        if let Some(t) = trace.as_mut() {
            t.amplitudes.as_mut().unwrap().push(state.mu.clone());
            t.fitness_raw.push(best_energy);
            t.fitness_best.push(best_energy);
        }

        for step in 1..=p.steps {
            let pump = pump_end * step as f64 / p.steps as f64;
            let gain = pump - 1.0 - p.j;
            let mut target = gain.max(0.0) / p.g2;
            if target > 0.0 {
                target = target.max(1.0);
            }
            let field_amp = target.sqrt();

            for ((w, m), mu) in noise.iter_mut().zip(&mut measured).zip(&state.mu) {
                *w = StandardNormal.sample(&mut rng);
                *m = mu + meas_scale * *w;
            }

            for i in 0..n {
                let (mu, sigma, e) = (state.mu[i], state.sigma[i], state.err[i]);
                let row = &coupling.j[i * n..(i + 1) * n];
                let local: f64 = row.iter().zip(&measured).map(|(a, b)| a * b).sum();
                let injection = e * (local + coupling.h[i] * field_amp);
                let mu2 = mu * mu;

                let new_mu = mu
                    + p.dt * (gain * mu - p.g2 * mu2 * mu + p.coupling_strength * injection)
                    + sqrt_dt * sqrt_j * (2.0 * sigma - 1.0) * p.noise_scale * noise[i];
                let new_sigma = sigma
                    + p.dt
                        * (2.0 * gain * sigma
                            - 6.0 * p.g2 * mu2 * sigma
                            - 2.0 * p.j * (sigma - 0.5).powi(2)
                            + 1.0
                            + p.j
                            + 2.0 * p.g2 * mu2);
                let new_err = (e - p.dt * p.beta * (mu2 - target) / target.max(1.0) * e)
                    .clamp(GAIN_MIN, GAIN_MAX);

                if !new_mu.is_finite() || !new_sigma.is_finite() || new_sigma <= 0.0 {
                    return Err(Error::NumericInstability {
                        batch,
                        step,
                        oscillator: i,
                        detail: format!("mu = {new_mu}, sigma = {new_sigma}"),
                    });
                }
                peak_sigma = peak_sigma.max(new_sigma);
                next.mu[i] = new_mu;
                next.sigma[i] = new_sigma;
                next.err[i] = new_err;
            }
            std::mem::swap(&mut state, &mut next);

            let readout = SpinConfig::from_signs(&state.mu);
            let energy = model.energy_unchecked(readout.as_slice()) + model.offset();
            if energy < best_energy {
                best_energy = energy;
                best_spins = readout;
                best_step = step;
            }
            if let Some(t) = trace.as_mut() {
                t.amplitudes.as_mut().unwrap().push(state.mu.clone());
                t.fitness_raw.push(energy);
                t.fitness_best.push(best_energy);
            }
        }

        Ok(BatchRun {
            batch,
            best_energy,
            best_spins,
            best_step,
            trace,
            state,
            peak_sigma,
        })
    }
}

struct BatchRun {
    peak_sigma: f64,
    batch: usize,
    best_energy: f64,
    best_spins: SpinConfig,
    best_step: usize,
    trace: Option<Trace>,
    state: OscillatorState,
}

impl IsingSolver for Cim {
    fn solve(&self, model: &IsingModel, seed: u64) -> Result<SolverRun> {
        let out = self.clone().with_seed(seed).solve(model)?;
        Ok(SolverRun {
            spins: out.spins,
            traces: out.traces,
        })
    }

    fn params(&self) -> serde_json::Value {
        serde_json::to_value(&self.params).unwrap_or_default()
    }
}

/// Runs the simulator with traces enabled.
pub fn cim_solve(model: &IsingModel, params: &CimParams) -> Result<CimOutcome> {
    Cim::new(params.clone())?.solve(model)
}
