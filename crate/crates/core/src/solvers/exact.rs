use super::SolveError;
use crate::instance::Instance;
use crate::lp::solve_matrix_game;
use crate::model::{
    solution_cost, AdversaryMixedStrategy, AdversaryPure, CostSource, FeasibleSet,
    PlayerMixedStrategy,
};
use crate::nominal::{enumeration_cap, NominalOracle};
use crate::regret::{extreme_cost_vector, max_regret_det};

#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicSolution {
    /// Minimizer of `R_max`; the lexicographically smallest one on ties.
    pub set: FeasibleSet,
    /// `Z_D`.
    pub value: f64,
    /// Cost vector attaining `R_max(set)`.
    pub worst: AdversaryPure,
    /// Number of feasible sets examined.
    pub candidates: usize,
}

/// `Z_D = min_T R_max(T)` by enumerating the feasible family.
pub fn solve_deterministic_exact(instance: &Instance) -> Result<DeterministicSolution, SolveError> {
    let family = instance.oracle().enumerate(enumeration_cap())?;
    let candidates = family.len();
    let mut best: Option<(FeasibleSet, f64, AdversaryPure)> = None;
    for set in family {
        let (value, worst) = max_regret_det(&set, instance).expect("enumerated sets are feasible");
        // enumeration is lexicographic, so a strict comparison keeps the smallest set
        if best.as_ref().is_none_or(|b| value < b.1) {
            best = Some((set, value, worst));
        }
    }
    let (set, value, worst) = best.expect("validated families are nonempty");
    Ok(DeterministicSolution {
        set,
        value,
        worst,
        candidates,
    })
}

#[derive(Debug, Clone)]
pub struct BruteForceGame {
    pub value: f64,
    pub player: PlayerMixedStrategy,
    pub adversary: AdversaryMixedStrategy,
    pub rows: usize,
    pub cols: usize,
}

/// Exact game value over the full payoff matrix `R(T_i, c_j)`.
///
/// Rows are all feasible sets; columns are the scenarios, or the extreme vectors
/// `c^A` for every feasible `A` under intervals.
pub fn bruteforce_game_value(instance: &Instance) -> Result<BruteForceGame, SolveError> {
    let cap = enumeration_cap();
    let family = instance.oracle().enumerate(cap)?;
    let columns: Vec<AdversaryPure> = match instance.intervals() {
        Some((lower, upper)) => {
            let mut cols: Vec<AdversaryPure> = Vec::with_capacity(family.len());
            for a in &family {
                let costs = extreme_cost_vector(a, lower, upper);
                if !cols.iter().any(|c| c.costs == costs) {
                    cols.push(AdversaryPure {
                        costs,
                        source: CostSource::Extreme(a.clone()),
                    });
                }
            }
            cols
        }
        None => (0..instance.scenario_count().expect("scenario instance"))
            .map(|s| instance.scenario_pure(s).expect("index in range"))
            .collect(),
    };
    let (rows, cols) = (family.len(), columns.len());
    if rows.saturating_mul(cols) > cap {
        return Err(SolveError::MatrixTooLarge { rows, cols, cap });
    }
    let optima: Vec<f64> = columns.iter().map(|c| instance.nominal_optimum(c)).collect();
    let payoff: Vec<Vec<f64>> = family
        .iter()
        .map(|t| {
            columns
                .iter()
                .zip(&optima)
                .map(|(c, opt)| solution_cost(t, &c.costs) - opt)
                .collect()
        })
        .collect();
    let game = solve_matrix_game(&payoff);
    let player = PlayerMixedStrategy::from_weights(family.into_iter().zip(game.row_mix).collect());
    let adversary = AdversaryMixedStrategy::from_weights(columns.into_iter().zip(game.col_mix).collect());
    Ok(BruteForceGame {
        value: game.value,
        player,
        adversary,
        rows,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{tight_discrete, tight_interval};
    use crate::instance::{validate_instance, InstanceDescription, NominalSpec, UncertaintySpec};

    #[test]
    fn deterministic_on_tight_instances() {
        for k in [2, 3, 5] {
            let inst = validate_instance(tight_discrete(k).unwrap()).unwrap();
            let sol = solve_deterministic_exact(&inst).unwrap();
            assert_eq!(sol.value, 1.0);
            assert_eq!(sol.set.to_indices(), vec![0]);
            assert_eq!(sol.candidates, k);
        }
        let inst = validate_instance(tight_interval()).unwrap();
        let sol = solve_deterministic_exact(&inst).unwrap();
        assert_eq!(sol.value, 1.0);
    }

    #[test]
    fn single_scenario_has_zero_regret() {
        let inst = validate_instance(InstanceDescription {
            name: "one".into(),
            n: 3,
            nominal: NominalSpec::KSelection { n: 3, k: 2 },
            uncertainty: UncertaintySpec::Scenarios {
                costs: vec![vec![4.0, 1.0, 2.0]],
            },
        })
        .unwrap();
        let sol = solve_deterministic_exact(&inst).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.set.to_indices(), vec![1, 2]);
    }

    #[test]
    fn brute_force_on_tight_instances() {
        let inst = validate_instance(tight_discrete(3).unwrap()).unwrap();
        let g = bruteforce_game_value(&inst).unwrap();
        assert!((g.value - 1.0 / 3.0).abs() <= 1e-9);
        assert_eq!((g.rows, g.cols), (3, 3));
        let inst = validate_instance(tight_interval()).unwrap();
        let g = bruteforce_game_value(&inst).unwrap();
        assert!((g.value - 0.5).abs() <= 1e-9);
    }
}
