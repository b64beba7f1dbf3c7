use super::{approx_mean_cost, SolveError, DEFAULT_MAX_ITER, SCENARIOS};
use crate::instance::Instance;
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation, Sense, VarBounds};
use crate::model::{solution_cost, AdversaryMixedStrategy, FeasibleSet, PlayerMixedStrategy};
use crate::regret::{player_best_response, BestResponse};

#[derive(Debug, Clone)]
pub struct AdversaryLpSolution {
    /// `Z_AR`, the optimum of the LP over the generated rows.
    pub value: f64,
    pub adversary: AdversaryMixedStrategy,
    /// Player mix read from the row duals.
    pub player: PlayerMixedStrategy,
    /// Player best-response value at the final `w`; a lower bound on `Z_AR`.
    pub lower_bound: f64,
    /// Number of generated rows.
    pub cuts: usize,
}

/// `max z  s.t.  Σ_S w_S R(T, c^S) ≥ z  for all T,  Σ_S w_S = 1,  w ≥ 0`.
///
/// Rows are generated lazily: the separating set for a given `w` is the nominal
/// minimizer at `d = Σ_S w_S c^S`. The first row is the mean-cost set.
pub fn solve_adversary_lp_discrete(
    instance: &Instance,
    tol: f64,
) -> Result<AdversaryLpSolution, SolveError> {
    let (scenarios, optima) = instance.scenarios().ok_or(SCENARIOS)?;
    let k = scenarios.len();
    let mut rows: Vec<FeasibleSet> = vec![approx_mean_cost(instance)?.set];

    loop {
        // variables: w_0..w_{k-1}, z
        let mut objective = vec![0.0; k + 1];
        objective[k] = 1.0;
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        lp.set_bounds(k, VarBounds::FREE);
        for t in &rows {
            let mut coeffs: Vec<f64> = scenarios
                .iter()
                .zip(optima)
                .map(|(c, opt)| solution_cost(t, c) - opt)
                .collect();
            coeffs.push(-1.0);
            lp.add_constraint(coeffs, Relation::GreaterEq, 0.0);
        }
        let mut simplex = vec![1.0; k];
        simplex.push(0.0);
        lp.add_constraint(simplex, Relation::Equal, 1.0);

        let sol = solve_lp(&lp).expect("finite payoffs");
        assert_eq!(sol.status, LpStatus::Optimal, "a probability simplex LP is bounded");
        let z = sol.objective;
        let adversary = AdversaryMixedStrategy::from_weights(
            (0..k)
                .map(|s| (instance.scenario_pure(s).expect("in range"), sol.primal[s].max(0.0)))
                .collect(),
        );
        let BestResponse::Player { set, value } = player_best_response(&adversary, instance) else {
            unreachable!("player oracle")
        };
        if z - value <= tol {
            let player = PlayerMixedStrategy::from_weights(
                rows.iter()
                    .cloned()
                    .zip(sol.dual.iter().map(|d| (-d).max(0.0)))
                    .collect(),
            );
            return Ok(AdversaryLpSolution {
                value: z,
                adversary,
                player,
                lower_bound: value,
                cuts: rows.len(),
            });
        }
        if rows.len() >= DEFAULT_MAX_ITER {
            return Err(SolveError::MaxCuts {
                cuts: rows.len(),
                lower: value,
                upper: z,
            });
        }
        if rows.contains(&set) {
            return Err(SolveError::NoProgress {
                iterations: rows.len(),
                lower: value,
                upper: z,
            });
        }
        rows.push(set);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{tight_discrete, tight_interval};
    use crate::instance::{validate_instance, InstanceDescription, NominalSpec, UncertaintySpec};
    use crate::model::marginal_of_strategy;
    use crate::regret::max_expected_regret;

    #[test]
    fn tight_instance_value_and_mixes() {
        let inst = validate_instance(tight_discrete(3).unwrap()).unwrap();
        let sol = solve_adversary_lp_discrete(&inst, 1e-7).unwrap();
        assert!((sol.value - 1.0 / 3.0).abs() <= 1e-9);
        for (_, w) in sol.adversary.support() {
            assert!((w - 1.0 / 3.0).abs() <= 1e-9);
        }
        // the row duals form an optimal player strategy
        let upper = max_expected_regret(&marginal_of_strategy(&sol.player), &inst).value();
        assert!((upper - sol.value).abs() <= 1e-9);
    }

    #[test]
    fn single_scenario() {
        let inst = validate_instance(InstanceDescription {
            name: "one".into(),
            n: 3,
            nominal: NominalSpec::KSelection { n: 3, k: 1 },
            uncertainty: UncertaintySpec::Scenarios {
                costs: vec![vec![2.0, 1.0, 3.0]],
            },
        })
        .unwrap();
        let sol = solve_adversary_lp_discrete(&inst, 1e-7).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.adversary.support_size(), 1);
        assert_eq!(sol.player.support()[0].0.to_indices(), vec![1]);
    }

    #[test]
    fn rejects_intervals() {
        let inst = validate_instance(tight_interval()).unwrap();
        assert!(matches!(
            solve_adversary_lp_discrete(&inst, 1e-7),
            Err(SolveError::WrongUncertainty { .. })
        ));
    }
}
