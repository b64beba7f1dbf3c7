use super::{SolveError, INTERVAL, SCENARIOS};
use crate::instance::Instance;
use crate::model::{solution_cost, AdversaryMixedStrategy, AdversaryPure, CostVector, FeasibleSet};
use crate::nominal::NominalOracle;
use crate::regret::{extreme_cost_vector, max_regret_det};

/// Identity checks for the midpoint set `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointCheck {
    /// `Σ_{e∈M} (c⁻_e + c⁺_e) - F*(c^M) - F*(c^{M̄})`.
    pub identity_value: f64,
    /// `identity_value - R_max(M)`.
    pub identity_residual: f64,
    /// `F*(c^M) - Σ_{e∈M} c⁻_e`.
    pub lower_sum_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub method: &'static str,
    /// Surrogate costs the nominal problem was solved at.
    pub surrogate: CostVector,
    pub set: FeasibleSet,
    /// True `R_max(set)`.
    pub max_regret: f64,
    pub worst: AdversaryPure,
    /// `k` for mean costs, 2 for midpoint costs, none for dual weights.
    pub guarantee: Option<f64>,
    pub midpoint: Option<MidpointCheck>,
}

fn finish(
    instance: &Instance,
    method: &'static str,
    surrogate: CostVector,
    guarantee: Option<f64>,
) -> Approximation {
    let (set, _) = instance.oracle().solve(&surrogate);
    let (max_regret, worst) = max_regret_det(&set, instance).expect("oracle output is feasible");
    Approximation {
        method,
        surrogate,
        set,
        max_regret,
        worst,
        guarantee,
        midpoint: None,
    }
}

/// Nominal minimizer at the scenario mean `(1/k) Σ_S c^S`.
pub fn approx_mean_cost(instance: &Instance) -> Result<Approximation, SolveError> {
    let (scenarios, _) = instance.scenarios().ok_or(SCENARIOS)?;
    let k = scenarios.len() as f64;
    let mut mean = vec![0.0; instance.n()];
    for c in scenarios {
        for (m, ce) in mean.iter_mut().zip(c.as_slice()) {
            *m += ce;
        }
    }
    mean.iter_mut().for_each(|m| *m /= k);
    Ok(finish(instance, "mean", CostVector(mean), Some(k)))
}

/// Nominal minimizer at `d = Σ_S w_S c^S` for an adversary mix over scenarios.
pub fn approx_dual_weighted(
    instance: &Instance,
    w: &AdversaryMixedStrategy,
) -> Result<Approximation, SolveError> {
    instance.scenarios().ok_or(SCENARIOS)?;
    Ok(finish(instance, "dual-weighted", w.mean_costs(), None))
}

/// Nominal minimizer at the midpoints `(c⁻ + c⁺) / 2`.
pub fn approx_midpoint(instance: &Instance) -> Result<Approximation, SolveError> {
    let (lower, upper) = instance.intervals().ok_or(INTERVAL)?;
    let mid = CostVector((0..instance.n()).map(|e| 0.5 * (lower[e] + upper[e])).collect());
    let mut approx = finish(instance, "midpoint", mid, Some(2.0));

    let m = &approx.set;
    let oracle = instance.oracle();
    let f_cm = oracle.solve(&extreme_cost_vector(m, lower, upper)).1;
    let f_cmbar = oracle.solve(&extreme_cost_vector(&m.complement(), lower, upper)).1;
    let width_sum: f64 = m.indices().map(|e| lower[e] + upper[e]).sum();
    let identity_value = width_sum - f_cm - f_cmbar;
    approx.midpoint = Some(MidpointCheck {
        identity_value,
        identity_residual: identity_value - approx.max_regret,
        lower_sum_residual: f_cm - solution_cost(m, lower),
    });
    Ok(approx)
}

/// Mean costs for scenarios, midpoint costs for intervals.
pub fn approx_auto(instance: &Instance) -> Approximation {
    if instance.is_interval() {
        approx_midpoint(instance)
    } else {
        approx_mean_cost(instance)
    }
    .expect("dispatch matches the uncertainty type")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{tight_discrete, tight_interval};
    use crate::instance::{validate_instance, InstanceDescription, NominalSpec, UncertaintySpec};

    #[test]
    fn tight_discrete_mean_cost() {
        let inst = validate_instance(tight_discrete(3).unwrap()).unwrap();
        let a = approx_mean_cost(&inst).unwrap();
        assert_eq!(a.set.to_indices(), vec![0]);
        assert_eq!(a.max_regret, 1.0);
        assert_eq!(a.guarantee, Some(3.0));
        assert!(matches!(approx_midpoint(&inst), Err(SolveError::WrongUncertainty { .. })));

        let uniform = AdversaryMixedStrategy::new(
            (0..3).map(|s| (inst.scenario_pure(s).unwrap(), 1.0 / 3.0)).collect(),
        )
        .unwrap();
        let d = approx_dual_weighted(&inst, &uniform).unwrap();
        assert_eq!(d.set, a.set);
        let degenerate = AdversaryMixedStrategy::pure(inst.scenario_pure(0).unwrap());
        // scenario 0 charges item 0, so the cheapest singleton is item 1
        assert_eq!(approx_dual_weighted(&inst, &degenerate).unwrap().set.to_indices(), vec![1]);
    }

    #[test]
    fn tight_interval_midpoint() {
        let inst = validate_instance(tight_interval()).unwrap();
        let a = approx_midpoint(&inst).unwrap();
        assert_eq!(a.set.to_indices(), vec![0]);
        assert_eq!(a.max_regret, 1.0);
        let check = a.midpoint.unwrap();
        assert_eq!(check.identity_residual, 0.0);
        assert_eq!(check.lower_sum_residual, 0.0);
    }

    #[test]
    fn no_uncertainty_means_no_regret() {
        let inst = validate_instance(InstanceDescription {
            name: "flat".into(),
            n: 3,
            nominal: NominalSpec::KSelection { n: 3, k: 1 },
            uncertainty: UncertaintySpec::Interval {
                lower: vec![2.0, 1.0, 3.0],
                upper: vec![2.0, 1.0, 3.0],
            },
        })
        .unwrap();
        assert_eq!(approx_midpoint(&inst).unwrap().max_regret, 0.0);
        let inst = validate_instance(InstanceDescription {
            name: "one".into(),
            n: 3,
            nominal: NominalSpec::KSelection { n: 3, k: 1 },
            uncertainty: UncertaintySpec::Scenarios {
                costs: vec![vec![2.0, 1.0, 3.0]],
            },
        })
        .unwrap();
        assert_eq!(approx_mean_cost(&inst).unwrap().max_regret, 0.0);
    }
}
