//! Invariant checks behind `verify`.

use std::collections::BTreeMap;

use minmax_regret::decompose::decompose_marginal;
use minmax_regret::regret::{max_expected_regret, player_best_response};
use minmax_regret::solvers::{
    approx_auto, bruteforce_game_value, solve_adversary_lp_discrete, solve_deterministic_exact,
    solve_randomized_with, DoubleOracleOptions,
};
use minmax_regret::{marginal_of_strategy, AdversaryMixedStrategy, Instance, PlayerMixedStrategy};
use serde::Serialize;

use crate::Failure;

const ORDER_TOL: f64 = 1e-9;
const VALUE_TOL: f64 = 1e-6;
const DECOMPOSE_TOL: f64 = 1e-7;

/// One inequality: passes when `measured ≤ tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Amount by which the inequality is violated; nonpositive means slack.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name: name.to_string(),
            pass: measured <= tolerance,
            measured,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub z_r: f64,
    pub z_d: f64,
    /// `Z_D / Z_R`, absent when `Z_R = 0`.
    pub gap_ratio: Option<f64>,
}

pub fn check_instance(inst: &Instance, tol: f64) -> Result<(InstanceSummary, Vec<Check>), Failure> {
    let options = DoubleOracleOptions {
        tol,
        ..DoubleOracleOptions::default()
    };
    let sol = solve_randomized_with(inst, options).map_err(Failure::solve)?;
    let det = solve_deterministic_exact(inst).map_err(Failure::solve)?;
    let brute = bruteforce_game_value(inst).map_err(Failure::solve)?;
    let approx = approx_auto(inst);
    let (z_r, z_d) = (sol.value, det.value);
    let mut checks = Vec::new();

    checks.push(Check::at_most(
        "Z_R <= Z_D",
        z_r - z_d,
        ORDER_TOL,
        format!("Z_R = {z_r}, Z_D = {z_d}"),
    ));
    let k = match inst.scenario_count() {
        Some(k) => k as f64,
        None => 2.0,
    };
    let gap_name = if inst.is_interval() { "Z_D/2 <= Z_R" } else { "Z_D/k <= Z_R" };
    checks.push(Check::at_most(
        gap_name,
        z_d / k - z_r,
        ORDER_TOL,
        format!("Z_D/{k} = {}, Z_R = {z_r}", z_d / k),
    ));
    checks.push(Check::at_most(
        "saddle bracket",
        sol.certified_gap,
        tol,
        format!("[{}, {}] after {} iterations", sol.lower_bound, sol.upper_bound, sol.iterations),
    ));
    if inst.scenarios().is_some() {
        let lp = solve_adversary_lp_discrete(inst, tol).map_err(Failure::solve)?;
        checks.push(Check::at_most(
            "Z_AR = Z_R",
            (lp.value - z_r).abs(),
            VALUE_TOL,
            format!("Z_AR = {}, Z_R = {z_r}, {} rows", lp.value, lp.cuts),
        ));
    }
    checks.push(Check::at_most(
        "brute-force game value = Z_R",
        (brute.value - z_r).abs(),
        VALUE_TOL,
        format!("brute = {} on a {}x{} matrix", brute.value, brute.rows, brute.cols),
    ));
    let bound = approx.guarantee.unwrap_or(k);
    checks.push(Check::at_most(
        if inst.is_interval() { "R_max(midpoint) <= 2 Z_R" } else { "R_max(mean) <= k Z_R" },
        approx.max_regret - bound * z_r,
        VALUE_TOL,
        format!("R_max(M) = {}, {bound} Z_R = {}", approx.max_regret, bound * z_r),
    ));
    if let Some(m) = approx.midpoint {
        checks.push(Check::at_most(
            "midpoint identity",
            m.identity_residual.abs().max(m.lower_sum_residual.abs()),
            ORDER_TOL,
            format!(
                "identity residual {}, lower-sum residual {}",
                m.identity_residual, m.lower_sum_residual
            ),
        ));
    }
    let p = marginal_of_strategy(&sol.player);
    match decompose_marginal(&p, inst.oracle(), DECOMPOSE_TOL) {
        Ok(d) => {
            let excess = d.strategy.support_size() as f64 - (inst.n() as f64 + 1.0);
            let mut check = Check::at_most(
                "marginal decomposition",
                d.error,
                DECOMPOSE_TOL,
                format!("error {}, support {} (n + 1 = {})", d.error, d.strategy.support_size(), inst.n() + 1),
            );
            check.pass &= excess <= 0.0;
            checks.push(check);
        }
        Err(e) => checks.push(Check {
            name: "marginal decomposition".to_string(),
            pass: false,
            measured: f64::INFINITY,
            tolerance: DECOMPOSE_TOL,
            detail: e.to_string(),
        }),
    }

    let summary = InstanceSummary {
        z_r,
        z_d,
        gap_ratio: (z_r > 0.0).then(|| z_d / z_r),
    };
    Ok((summary, checks))
}

/// Checks that stored strategies certify `value` within `tol` from both sides.
pub fn check_strategies(
    inst: &Instance,
    player: &PlayerMixedStrategy,
    adversary: &AdversaryMixedStrategy,
    value: f64,
    tol: f64,
) -> Vec<Check> {
    let upper = max_expected_regret(&marginal_of_strategy(player), inst).value();
    let lower = player_best_response(adversary, inst).value();
    vec![
        Check::at_most(
            "player strategy guarantees value",
            upper - value,
            tol,
            format!("max expected regret {upper} against value {value}"),
        ),
        Check::at_most(
            "adversary strategy guarantees value",
            value - lower,
            tol,
            format!("best response regret {lower} against value {value}"),
        ),
    ]
}

/// Folds per-instance checks into one line per check name, keeping the worst case.
pub fn aggregate(runs: &[(String, Vec<Check>)]) -> Vec<Check> {
    let mut worst: BTreeMap<String, (Check, String, usize, usize)> = BTreeMap::new();
    let mut order = Vec::new();
    for (label, checks) in runs {
        for c in checks {
            let entry = worst.entry(c.name.clone()).or_insert_with(|| {
                order.push(c.name.clone());
                (c.clone(), label.clone(), 0, 0)
            });
            entry.2 += 1;
            if !c.pass {
                entry.3 += 1;
            }
            let replace = (entry.0.pass && !c.pass) || (entry.0.pass == c.pass && c.measured > entry.0.measured);
            if replace {
                entry.0 = c.clone();
                entry.1 = label.clone();
            }
        }
    }
    order
        .into_iter()
        .map(|name| {
            let (c, label, count, failed) = worst.remove(&name).unwrap();
            Check {
                pass: failed == 0,
                detail: format!("{failed} of {count} failed; worst at {label}: {}", c.detail),
                ..c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use minmax_regret::gen::{tight_discrete, tight_interval};
    use minmax_regret::solvers::solve_randomized;
    use minmax_regret::validate_instance;

    #[test]
    fn tight_instances_pass_every_check() {
        for desc in [tight_discrete(3).unwrap(), tight_interval()] {
            let inst = validate_instance(desc).unwrap();
            let (summary, checks) = check_instance(&inst, 1e-7).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{checks:?}");
            let k = inst.scenario_count().unwrap_or(2) as f64;
            assert!((summary.gap_ratio.unwrap() - k).abs() < 1e-9);
            let sol = solve_randomized(&inst).unwrap();
            let s = check_strategies(&inst, &sol.player, &sol.adversary, sol.value, 1e-7);
            assert!(s.iter().all(|c| c.pass));
            // a wrong stated value is caught from one side
            let s = check_strategies(&inst, &sol.player, &sol.adversary, sol.value + 0.1, 1e-7);
            assert!(!s.iter().all(|c| c.pass));
        }
    }

    #[test]
    fn aggregation_keeps_the_worst_failure() {
        let runs = vec![
            ("a".to_string(), vec![Check::at_most("x", -1.0, 0.0, "fine".into())]),
            ("b".to_string(), vec![Check::at_most("x", 2.0, 0.0, "bad".into())]),
            ("c".to_string(), vec![Check::at_most("x", 0.0, 0.0, "edge".into())]),
        ];
        let agg = aggregate(&runs);
        assert_eq!(agg.len(), 1);
        assert!(!agg[0].pass);
        assert_eq!(agg[0].measured, 2.0);
        assert!(agg[0].detail.starts_with("1 of 3 failed; worst at b"));
    }
}
