//! Regret evaluations and best-response oracles.
//!
//! Under interval uncertainty the adversary plays extreme vectors `c^A` (lower
//! bound on `A`, upper bound elsewhere); under scenarios it plays scenarios.

use thiserror::Error;

use crate::instance::Instance;
use crate::model::{
    solution_cost, AdversaryMixedStrategy, AdversaryPure, CostSource, CostVector, FeasibleSet,
    MarginalVector,
};
use crate::nominal::NominalOracle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegretError {
    #[error("operation needs {expected} uncertainty")]
    WrongUncertainty { expected: &'static str },
    #[error("set {0} is not feasible for this instance")]
    Infeasible(String),
}

const INTERVAL: RegretError = RegretError::WrongUncertainty {
    expected: "interval",
};
const SCENARIOS: RegretError = RegretError::WrongUncertainty {
    expected: "scenario",
};

/// A best response together with the exact payoff it achieves.
#[derive(Debug, Clone, PartialEq)]
pub enum BestResponse {
    /// Set minimizing expected regret against an adversary mix.
    Player { set: FeasibleSet, value: f64 },
    /// Cost vector maximizing expected regret against a marginal.
    Adversary { pure: AdversaryPure, value: f64 },
}

impl BestResponse {
    pub fn value(&self) -> f64 {
        match self {
            BestResponse::Player { value, .. } | BestResponse::Adversary { value, .. } => *value,
        }
    }
}

/// `c^A`: lower bound on `A`, upper bound elsewhere.
pub fn extreme_cost_vector(a: &FeasibleSet, lower: &CostVector, upper: &CostVector) -> CostVector {
    CostVector(
        (0..a.n())
            .map(|e| if a.contains(e) { lower[e] } else { upper[e] })
            .collect(),
    )
}

fn extreme_pure(a: FeasibleSet, lower: &CostVector, upper: &CostVector) -> AdversaryPure {
    AdversaryPure {
        costs: extreme_cost_vector(&a, lower, upper),
        source: CostSource::Extreme(a),
    }
}

fn check_feasible(set: &FeasibleSet, instance: &Instance) -> Result<(), RegretError> {
    if set.n() != instance.n() || !instance.oracle().is_feasible(set) {
        return Err(RegretError::Infeasible(set.to_string()));
    }
    Ok(())
}

/// `R(T, c)` for an adversary pure strategy, using cached scenario optima.
pub fn pure_regret(set: &FeasibleSet, pure: &AdversaryPure, instance: &Instance) -> f64 {
    solution_cost(set, &pure.costs) - instance.nominal_optimum(pure)
}

/// `R_max(T)` under intervals with the maximizing vector: upper on `T`, lower off it.
pub fn max_regret_det_interval(
    set: &FeasibleSet,
    instance: &Instance,
) -> Result<(f64, AdversaryPure), RegretError> {
    let (lower, upper) = instance.intervals().ok_or(INTERVAL)?;
    check_feasible(set, instance)?;
    let worst = extreme_pure(set.complement(), lower, upper);
    Ok((pure_regret(set, &worst, instance), worst))
}

/// `R_max(T) = max_S R(T, c^S)`; ties go to the lowest scenario index.
pub fn max_regret_det_discrete(
    set: &FeasibleSet,
    instance: &Instance,
) -> Result<(f64, usize), RegretError> {
    let (scenarios, optima) = instance.scenarios().ok_or(SCENARIOS)?;
    check_feasible(set, instance)?;
    let mut best = (f64::NEG_INFINITY, 0);
    for (s, (c, opt)) in scenarios.iter().zip(optima).enumerate() {
        let r = solution_cost(set, c) - opt;
        if r > best.0 {
            best = (r, s);
        }
    }
    Ok(best)
}

/// `R_max(T)` for either uncertainty type, with the worst cost vector.
pub fn max_regret_det(
    set: &FeasibleSet,
    instance: &Instance,
) -> Result<(f64, AdversaryPure), RegretError> {
    if instance.is_interval() {
        max_regret_det_interval(set, instance)
    } else {
        let (value, s) = max_regret_det_discrete(set, instance)?;
        let pure = instance.scenario_pure(s).expect("index from the scan");
        Ok((value, pure))
    }
}

/// `R̄_max(p)` under intervals.
///
/// With `d_e = c⁻_e + p_e (c⁺_e - c⁻_e)` and `(T_d, z_d)` the nominal optimum at
/// `d`, the value is `Σ_e c⁺_e p_e - z_d` and the maximizer is `c^{T_d}`.
pub fn max_expected_regret_interval(
    p: &MarginalVector,
    instance: &Instance,
) -> Result<BestResponse, RegretError> {
    let (lower, upper) = instance.intervals().ok_or(INTERVAL)?;
    assert_eq!(p.len(), instance.n(), "marginal length");
    let d = CostVector(
        (0..p.len())
            .map(|e| lower[e] + p.0[e] * (upper[e] - lower[e]))
            .collect(),
    );
    let (t_d, z_d) = instance.oracle().solve(&d);
    let upper_mass: f64 = (0..p.len()).map(|e| upper[e] * p.0[e]).sum();
    Ok(BestResponse::Adversary {
        pure: extreme_pure(t_d, lower, upper),
        value: upper_mass - z_d,
    })
}

/// `R̄_max(p) = max_S (c^S · p - F*(c^S))`; ties go to the lowest scenario index.
pub fn max_expected_regret_discrete(
    p: &MarginalVector,
    instance: &Instance,
) -> Result<BestResponse, RegretError> {
    let (scenarios, optima) = instance.scenarios().ok_or(SCENARIOS)?;
    assert_eq!(p.len(), instance.n(), "marginal length");
    let mut best = (f64::NEG_INFINITY, 0);
    for (s, (c, opt)) in scenarios.iter().zip(optima).enumerate() {
        let v: f64 = c.0.iter().zip(&p.0).map(|(ce, pe)| ce * pe).sum::<f64>() - opt;
        if v > best.0 {
            best = (v, s);
        }
    }
    Ok(BestResponse::Adversary {
        pure: instance.scenario_pure(best.1).expect("index from the scan"),
        value: best.0,
    })
}

/// Adversary best response to a marginal for either uncertainty type.
pub fn max_expected_regret(p: &MarginalVector, instance: &Instance) -> BestResponse {
    if instance.is_interval() {
        max_expected_regret_interval(p, instance)
    } else {
        max_expected_regret_discrete(p, instance)
    }
    .expect("dispatch matches the uncertainty type")
}

/// Set minimizing `Σ_c w_c R(T, c) = F(T, d) - Σ_c w_c F*(c)` with `d = Σ_c w_c c`.
pub fn player_best_response(w: &AdversaryMixedStrategy, instance: &Instance) -> BestResponse {
    let d = w.mean_costs();
    assert_eq!(d.len(), instance.n(), "cost vector length");
    let (set, f_d) = instance.oracle().solve(&d);
    let baseline: f64 = w
        .support()
        .iter()
        .map(|(pure, wc)| wc * instance.nominal_optimum(pure))
        .sum();
    BestResponse::Player {
        set,
        value: f_d - baseline,
    }
}
