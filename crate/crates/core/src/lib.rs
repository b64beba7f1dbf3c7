//! Minmax regret for combinatorial problems with uncertain linear costs.
//!
//! A player picks a feasible set `T` from a family `F`; an adversary picks costs
//! from an interval box or a finite scenario list. The regret `F(T, c) - F*(c)` is
//! the gap to the best set in hindsight. This crate computes optimal mixed
//! strategies for both sides (randomized minmax regret), the exact deterministic
//! minmax regret, the mean-cost and midpoint approximations, marginal
//! decompositions and Monte Carlo estimates.
//!
//! ```
//! use minmax_regret::{gen, instance::validate_instance, solvers};
//!
//! let inst = validate_instance(gen::tight_interval()).unwrap();
//! let randomized = solvers::solve_randomized(&inst).unwrap();
//! let deterministic = solvers::solve_deterministic_exact(&inst).unwrap();
//! assert!((randomized.value - 0.5).abs() < 1e-9);
//! assert_eq!(deterministic.value, 1.0);
//! ```

pub mod decompose;
pub mod gen;
pub mod instance;
pub mod lp;
pub mod model;
pub mod nominal;
pub mod regret;
pub mod sim;
pub mod solvers;

pub use instance::{validate_instance, Instance, InstanceDescription, InstanceError};
pub use model::{
    expected_regret, marginal_of_strategy, regret, solution_cost, AdversaryMixedStrategy,
    AdversaryPure, CostSource, CostVector, FeasibleSet, GameSolution, MarginalVector,
    PlayerMixedStrategy,
};
pub use nominal::{Nominal, NominalOracle};
