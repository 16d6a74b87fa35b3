//! Test-case selection and minimization as Ising models.
//!
//! A [`TestSuite`] and a [`ProblemSpec`] are encoded into an [`IsingModel`]
//! whose ground state is the best selection. The model is then solved by the
//! simulated coherent Ising machine in [`cim`] or by one of the baselines in
//! [`classical`], and results are summarized by [`analysis`].

pub mod analysis;
pub mod bench;
pub mod cim;
pub mod classical;
pub mod encoding;
pub mod error;
pub mod ising;
pub mod solver;

pub use encoding::{
    to_ising, AttributeKind, AttributeRole, ClassicalInfo, Constraint, Problem, ProblemParams,
    ProblemRegistry, ProblemSpec, Strategy, WeightedAttributeProblem,
};
pub use error::{Error, ErrorKind, Result};
pub use ising::{IsingModel, Selection, SpinConfig, TestCase, TestSuite};
pub use solver::{run_solver, SolverRegistry, SolverResult, Trace};
