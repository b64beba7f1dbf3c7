use super::{approx_auto, SolveError, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use crate::instance::Instance;
use crate::lp::solve_matrix_game;
use crate::model::{
    marginal_of_strategy, solution_cost, AdversaryMixedStrategy, AdversaryPure, FeasibleSet,
    GameSolution, MarginalVector, PlayerMixedStrategy,
};
use crate::regret::{max_expected_regret, player_best_response, BestResponse};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleOracleOptions {
    /// Stop once the best-response bracket is at most this wide.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DoubleOracleOptions {
    fn default() -> Self {
        DoubleOracleOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Restricted game over the active pure strategies, with the payoff cache.
struct Restricted<'a> {
    instance: &'a Instance,
    sets: Vec<FeasibleSet>,
    costs: Vec<AdversaryPure>,
    optima: Vec<f64>,
    /// `payoff[i][j] = R(sets[i], costs[j])`.
    payoff: Vec<Vec<f64>>,
}

impl<'a> Restricted<'a> {
    fn add_set(&mut self, set: FeasibleSet) -> bool {
        if self.sets.contains(&set) {
            return false;
        }
        let row = self
            .costs
            .iter()
            .zip(&self.optima)
            .map(|(c, opt)| solution_cost(&set, &c.costs) - opt)
            .collect();
        self.payoff.push(row);
        self.sets.push(set);
        true
    }

    fn add_costs(&mut self, pure: AdversaryPure) -> bool {
        if self.costs.iter().any(|c| c.costs == pure.costs) {
            return false;
        }
        let opt = self.instance.nominal_optimum(&pure);
        for (row, set) in self.payoff.iter_mut().zip(&self.sets) {
            row.push(solution_cost(set, &pure.costs) - opt);
        }
        self.optima.push(opt);
        self.costs.push(pure);
        true
    }
}

/// Randomized minmax regret with the default tolerance and iteration budget.
pub fn solve_randomized(instance: &Instance) -> Result<GameSolution, SolveError> {
    solve_randomized_with(instance, DoubleOracleOptions::default())
}

/// Double oracle over player sets and adversary cost vectors.
///
/// Starts from the approximation set and the adversary's best response to it.
/// Each round solves the restricted matrix game, asks both players for a best
/// response to the other's restricted optimum and stops when the bracket
/// `R̄_max(p) - min_T R̄(T, w)` is at most `tol`.
pub fn solve_randomized_with(
    instance: &Instance,
    options: DoubleOracleOptions,
) -> Result<GameSolution, SolveError> {
    let start = approx_auto(instance).set;
    let mut game = Restricted {
        instance,
        sets: Vec::new(),
        costs: Vec::new(),
        optima: Vec::new(),
        payoff: Vec::new(),
    };
    let reply = max_expected_regret(&MarginalVector(start.to_vector()), instance);
    let BestResponse::Adversary { pure, .. } = reply else {
        unreachable!("adversary oracle")
    };
    game.add_costs(pure);
    game.add_set(start);

    let mut iterations = 0;
    loop {
        iterations += 1;
        let mix = solve_matrix_game(&game.payoff);
        let player = PlayerMixedStrategy::from_weights(
            game.sets.iter().cloned().zip(mix.row_mix.iter().copied()).collect(),
        );
        let adversary = AdversaryMixedStrategy::from_weights(
            game.costs.iter().cloned().zip(mix.col_mix.iter().copied()).collect(),
        );
        let marginal = marginal_of_strategy(&player);

        let BestResponse::Adversary { pure, value: upper } = max_expected_regret(&marginal, instance)
        else {
            unreachable!("adversary oracle")
        };
        let BestResponse::Player { set, value: lower } = player_best_response(&adversary, instance)
        else {
            unreachable!("player oracle")
        };
        let gap = upper - lower;
        let solution = GameSolution {
            value: mix.value,
            player,
            marginal,
            adversary,
            iterations,
            certified_gap: gap.max(0.0),
            upper_bound: upper,
            lower_bound: lower,
        };
        if gap <= options.tol {
            return Ok(solution);
        }
        if iterations >= options.max_iter {
            return Err(SolveError::MaxIterations {
                iterations,
                lower,
                upper,
                partial: Box::new(solution),
            });
        }
        let mut added = false;
        if upper > mix.value {
            added |= game.add_costs(pure);
        }
        if lower < mix.value {
            added |= game.add_set(set);
        }
        if !added {
            return Err(SolveError::NoProgress {
                iterations,
                lower,
                upper,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{tight_discrete, tight_interval};
    use crate::instance::{validate_instance, InstanceDescription, NominalSpec, UncertaintySpec};

    #[test]
    fn tight_discrete_value() {
        for k in [2, 3, 5, 10] {
            let inst = validate_instance(tight_discrete(k).unwrap()).unwrap();
            let sol = solve_randomized(&inst).unwrap();
            let target = 1.0 / k as f64;
            assert!((sol.value - target).abs() <= 1e-9, "k={k}: {}", sol.value);
            assert!(sol.certified_gap <= DEFAULT_TOLERANCE);
            assert_eq!(sol.player.support_size(), k);
            assert_eq!(sol.adversary.support_size(), k);
            for (_, y) in sol.player.support() {
                assert!((y - target).abs() <= 1e-9);
            }
            for (c, w) in sol.adversary.support() {
                assert!(c.scenario_index().is_some());
                assert!((w - target).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn tight_interval_value() {
        let inst = validate_instance(tight_interval()).unwrap();
        let sol = solve_randomized(&inst).unwrap();
        assert!((sol.value - 0.5).abs() <= 1e-9);
        assert!((sol.marginal.0[0] - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn degenerate_intervals_pick_the_nominal_minimizer() {
        let inst = validate_instance(InstanceDescription {
            name: "flat".into(),
            n: 3,
            nominal: NominalSpec::KSelection { n: 3, k: 2 },
            uncertainty: UncertaintySpec::Interval {
                lower: vec![3.0, 1.0, 2.0],
                upper: vec![3.0, 1.0, 2.0],
            },
        })
        .unwrap();
        let sol = solve_randomized(&inst).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.player.support_size(), 1);
        assert_eq!(sol.player.support()[0].0.to_indices(), vec![1, 2]);
    }

    #[test]
    fn iteration_budget_reports_the_bracket() {
        let inst = validate_instance(tight_discrete(5).unwrap()).unwrap();
        let options = DoubleOracleOptions {
            tol: 1e-7,
            max_iter: 1,
        };
        match solve_randomized_with(&inst, options) {
            Err(SolveError::MaxIterations {
                iterations,
                lower,
                upper,
                partial,
            }) => {
                assert_eq!(iterations, 1);
                assert!(lower <= 0.2 + 1e-9 && 0.2 <= upper + 1e-9);
                assert_eq!(partial.upper_bound, upper);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
