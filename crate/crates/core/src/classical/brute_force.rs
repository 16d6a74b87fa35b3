use serde::Serialize;

use crate::error::{Error, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::solver::{IsingSolver, ParamReader, SolverParams, SolverRun};

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 25;

/// Exhaustive minimization of the total energy.
///
/// Visits configurations in Gray-code order with O(n) local-field updates.
/// Among minima the lexicographically smallest spin vector (with `-1 < +1`)
/// wins; energies within `1e-9 · max(1, |E|)` count as ties since the
/// running energy accumulates rounding error. The returned energy is
/// recomputed from scratch.
pub fn brute_force(model: &IsingModel, limit: usize) -> Result<(SpinConfig, f64)> {
    let n = model.n();
    if n > limit || n >= 64 {
        return Err(Error::SizeLimit { n, limit });
    }
    if n == 0 {
        return Err(Error::InvalidModel("model has no spins".into()));
    }
    let h = model.h();
    let mut spins = vec![-1.0f64; n];
    // field[i] = Σ_j J_ij s_j
    let mut field: Vec<f64> = (0..n)
        .map(|i| model.j_row(i).iter().map(|v| -v).sum())
        .collect();
    let mut energy = model.energy_unchecked(&vec![-1i8; n]);
    let mut rank = 0u64;
    let (mut best_energy, mut best_rank) = (energy, 0u64);

    for g in 1..(1u64 << n) {
        let bit = g.trailing_zeros() as usize;
        let i = n - 1 - bit;
        let si = spins[i];
        energy += 2.0 * h[i] * si + 2.0 * si * field[i];
        spins[i] = -si;
        rank ^= 1 << bit;
        let delta_s = -2.0 * si;
        for (f, jij) in field.iter_mut().zip(model.j_row(i)) {
            *f += jij * delta_s;
        }
        let tol = 1e-9 * best_energy.abs().max(1.0);
        if energy < best_energy - tol {
            best_energy = energy;
            best_rank = rank;
        } else if energy <= best_energy + tol {
            best_energy = best_energy.min(energy);
            best_rank = best_rank.min(rank);
        }
    }
    let best = SpinConfig::from_rank(best_rank, n);
    let e = model.total_energy(&best)?;
    Ok((best, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteForce {
    pub limit: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        Self {
            limit: DEFAULT_BRUTE_FORCE_LIMIT,
        }
    }
}

impl BruteForce {
    pub fn from_params(params: &SolverParams) -> Result<Self> {
        let r = ParamReader::new(params, &["limit"])?;
        Ok(Self {
            limit: r.get("limit", DEFAULT_BRUTE_FORCE_LIMIT)?,
        })
    }
}

impl IsingSolver for BruteForce {
    fn solve(&self, model: &IsingModel, _seed: u64) -> Result<SolverRun> {
        let (spins, _) = brute_force(model, self.limit)?;
        Ok(SolverRun {
            spins,
            traces: vec![],
        })
    }

    fn params(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(model: &IsingModel) -> (SpinConfig, f64) {
        let n = model.n();
        let mut best: Option<(SpinConfig, f64)> = None;
        for r in 0..(1u64 << n) {
            let s = SpinConfig::from_rank(r, n);
            let e = model.total_energy(&s).unwrap();
            if best.as_ref().is_none_or(|b| e < b.1 - 1e-9) {
                best = Some((s, e));
            }
        }
        best.unwrap()
    }

    #[test]
    fn zero_model_ties_resolve_to_all_selected() {
        let m = IsingModel::new(vec![0.0; 3], vec![0.0; 9], 0.7).unwrap();
        let (s, e) = brute_force(&m, 25).unwrap();
        assert_eq!(s.as_slice(), [-1, -1, -1]);
        assert_eq!(e, 0.7);
    }

    #[test]
    fn single_spin_aligns_with_field() {
        let m = IsingModel::new(vec![1.0], vec![0.0], 0.0).unwrap();
        let (s, e) = brute_force(&m, 25).unwrap();
        assert_eq!(s.as_slice(), [1]);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn size_limit() {
        let m = IsingModel::zeros(5);
        match brute_force(&m, 4) {
            Err(Error::SizeLimit { n: 5, limit: 4 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.random_range(1..=10);
            let mut m = IsingModel::new(
                (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                vec![0.0; n * n],
                rng.random_range(-1.0..1.0),
            )
            .unwrap();
            for a in 0..n {
                for b in (a + 1)..n {
                    m.set_coupling(a, b, rng.random_range(-1.0..1.0));
                }
            }
            let (s, e) = brute_force(&m, 25).unwrap();
            let (ns, ne) = naive(&m);
            assert_eq!(s, ns);
            assert!((e - ne).abs() < 1e-12);
        }
    }
}
