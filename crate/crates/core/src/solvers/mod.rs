//! Top-level solvers for randomized and deterministic minmax regret.

mod adversary_lp;
mod approx;
mod double_oracle;
mod exact;

use thiserror::Error;

use crate::model::GameSolution;
use crate::nominal::NominalError;

pub use adversary_lp::{solve_adversary_lp_discrete, AdversaryLpSolution};
pub use approx::{
    approx_auto, approx_dual_weighted, approx_mean_cost, approx_midpoint, Approximation,
    MidpointCheck,
};
pub use double_oracle::{solve_randomized, solve_randomized_with, DoubleOracleOptions};
pub use exact::{bruteforce_game_value, solve_deterministic_exact, BruteForceGame, DeterministicSolution};

pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Error, Clone)]
pub enum SolveError {
    #[error("operation needs {expected} uncertainty")]
    WrongUncertainty { expected: &'static str },
    #[error("{iterations} iterations exhausted with value in [{lower}, {upper}]")]
    MaxIterations {
        iterations: usize,
        lower: f64,
        upper: f64,
        /// Best strategies found so far, with the bracket filled in.
        partial: Box<GameSolution>,
    },
    #[error("no new pure strategy after {iterations} iterations with value in [{lower}, {upper}]")]
    NoProgress {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
    #[error("{cuts} generated rows exhausted with value in [{lower}, {upper}]")]
    MaxCuts { cuts: usize, lower: f64, upper: f64 },
    #[error("enumeration failed: {0}")]
    Enumeration(#[from] NominalError),
    #[error("payoff matrix of {rows}x{cols} exceeds the enumeration cap {cap}")]
    MatrixTooLarge { rows: usize, cols: usize, cap: usize },
}

impl SolveError {
    /// Resource exhaustion rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        !matches!(self, SolveError::WrongUncertainty { .. })
    }
}

pub(crate) const INTERVAL: SolveError = SolveError::WrongUncertainty {
    expected: "interval",
};
pub(crate) const SCENARIOS: SolveError = SolveError::WrongUncertainty {
    expected: "scenario",
};
