//! Classical baselines: exhaustive enumeration over spins, simulated
//! annealing and a genetic algorithm over selection masks.

mod annealing;
mod brute_force;
mod genetic;

pub use annealing::{simulated_annealing, SaParams, SimulatedAnnealing};
pub use brute_force::{brute_force, BruteForce, DEFAULT_BRUTE_FORCE_LIMIT};
pub use genetic::{genetic_algorithm, genetic_algorithm_from, GaParams, GeneticAlgorithm};

use rand::Rng;

use crate::encoding::Constraint;
use crate::error::{Error, Result};
use crate::solver::ClassicalObjective;

/// Deselects uniformly random selected tests until `constraint` holds.
/// Returns `false` if the mask is still infeasible once nothing is selected.
pub(crate) fn repair<R: Rng>(mask: &mut [bool], constraint: &Constraint, rng: &mut R) -> bool {
    while !constraint.is_feasible(mask) {
        let selected: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        if selected.is_empty() {
            return false;
        }
        mask[selected[rng.random_range(0..selected.len())]] = false;
    }
    true
}

pub(crate) fn evaluate(objective: &ClassicalObjective<'_>, mask: &[bool]) -> Result<f64> {
    let v = objective(mask)?;
    if !v.is_finite() {
        return Err(Error::Evaluation(format!("objective returned {v}")));
    }
    Ok(v)
}

pub(crate) fn random_mask<R: Rng>(n: usize, rng: &mut R) -> Vec<bool> {
    (0..n).map(|_| rng.random_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn repair_respects_budget(mask in prop::collection::vec(any::<bool>(), 1..40), b in 0usize..40, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = mask.clone();
            let before = m.iter().filter(|&&x| x).count();
            prop_assert!(repair(&mut m, &Constraint::MaxSelected(b), &mut rng));
            let after = m.iter().filter(|&&x| x).count();
            prop_assert!(after <= b);
            prop_assert_eq!(after, before.min(b));
            // only deselections
            prop_assert!(m.iter().zip(&mask).all(|(&a, &o)| !a || o));
        }
    }

    #[test]
    fn unrepairable_predicate_reports_failure() {
        let c = Constraint::Predicate(std::sync::Arc::new(|m: &[bool]| m[0]));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut m = vec![false, true];
        assert!(!repair(&mut m, &c, &mut rng));
    }
}
