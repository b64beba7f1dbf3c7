//! Strategy files: `{sets, probs}` for the player, `{costs, probs}` for the
//! adversary, and a combined `{player, adversary}` document (a `solve` report
//! qualifies, its other fields are ignored).

use minmax_regret::model::StrategyError;
use minmax_regret::{AdversaryMixedStrategy, AdversaryPure, CostVector, Instance, PlayerMixedStrategy};
use serde::{Deserialize, Serialize};

/// Tolerance for reading interval cost vectors back from a JSON file.
const BOX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerFile {
    pub sets: Vec<Vec<usize>>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdversaryFile {
    pub costs: Vec<Vec<f64>>,
    pub probs: Vec<f64>,
    /// Scenario index per support entry, when it is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, Deserialize)]
struct Combined {
    player: PlayerFile,
    adversary: AdversaryFile,
}

impl PlayerFile {
    pub fn from_strategy(y: &PlayerMixedStrategy) -> Self {
        PlayerFile {
            sets: y.support().iter().map(|(t, _)| t.to_indices()).collect(),
            probs: y.support().iter().map(|(_, p)| *p).collect(),
        }
    }

    pub fn to_strategy(&self, inst: &Instance) -> Result<PlayerMixedStrategy, String> {
        if self.sets.len() != self.probs.len() {
            return Err(format!(
                "player strategy has {} sets but {} probabilities",
                self.sets.len(),
                self.probs.len()
            ));
        }
        let mut support = Vec::with_capacity(self.sets.len());
        for (index, (items, p)) in self.sets.iter().zip(&self.probs).enumerate() {
            if let Some(&item) = items.iter().find(|&&e| e >= inst.n()) {
                return Err(StrategyError::ItemOutOfRange { index, item, n: inst.n() }.to_string());
            }
            let set = inst
                .feasible_set(items)
                .ok_or_else(|| StrategyError::Infeasible { index }.to_string())?;
            support.push((set, *p));
        }
        PlayerMixedStrategy::new(support).map_err(|e| format!("player strategy: {e}"))
    }
}

impl AdversaryFile {
    pub fn from_strategy(w: &AdversaryMixedStrategy) -> Self {
        let scenarios: Vec<Option<usize>> = w.support().iter().map(|(c, _)| c.scenario_index()).collect();
        AdversaryFile {
            costs: w.support().iter().map(|(c, _)| c.costs.0.clone()).collect(),
            probs: w.support().iter().map(|(_, p)| *p).collect(),
            scenarios: scenarios.iter().any(Option::is_some).then_some(scenarios),
        }
    }

    pub fn to_strategy(&self, inst: &Instance) -> Result<AdversaryMixedStrategy, String> {
        if self.costs.len() != self.probs.len() {
            return Err(format!(
                "adversary strategy has {} cost vectors but {} probabilities",
                self.costs.len(),
                self.probs.len()
            ));
        }
        let mut support: Vec<(AdversaryPure, f64)> = Vec::with_capacity(self.costs.len());
        for (index, (costs, p)) in self.costs.iter().zip(&self.probs).enumerate() {
            if costs.len() != inst.n() {
                return Err(StrategyError::LengthMismatch {
                    index,
                    expected: inst.n(),
                    found: costs.len(),
                }
                .to_string());
            }
            let costs = CostVector(costs.clone());
            if !inst.contains_costs(&costs, BOX_TOLERANCE) {
                return Err(StrategyError::OutsideUncertainty { index }.to_string());
            }
            support.push((inst.classify_costs(costs), *p));
        }
        AdversaryMixedStrategy::new(support).map_err(|e| format!("adversary strategy: {e}"))
    }
}

/// Reads a combined strategies document.
pub fn parse_strategies(
    text: &str,
    inst: &Instance,
) -> Result<(PlayerMixedStrategy, AdversaryMixedStrategy), String> {
    let combined: Combined =
        serde_json::from_str(text).map_err(|e| format!("malformed strategies file: {e}"))?;
    Ok((
        combined.player.to_strategy(inst)?,
        combined.adversary.to_strategy(inst)?,
    ))
}

/// A numeric top-level field of a strategies document, if any.
pub fn stated_number(text: &str, key: &str) -> Option<f64> {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()?
        .get(key)?
        .as_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use minmax_regret::gen::tight_discrete;
    use minmax_regret::validate_instance;

    #[test]
    fn round_trip_and_rejections() {
        let inst = validate_instance(tight_discrete(3).unwrap()).unwrap();
        let text = r#"{"player": {"sets": [[0], [1], [2]], "probs": [0.5, 0.25, 0.25]},
                       "adversary": {"costs": [[1, 0, 0]], "probs": [1.0]}, "value": 0.5}"#;
        let (y, w) = parse_strategies(text, &inst).unwrap();
        assert_eq!(y.support_size(), 3);
        assert_eq!(w.support()[0].0.scenario_index(), Some(0));
        assert_eq!(stated_number(text, "value"), Some(0.5));
        assert_eq!(stated_number(text, "tolerance"), None);
        assert_eq!(PlayerFile::from_strategy(&y).sets, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(AdversaryFile::from_strategy(&w).scenarios, Some(vec![Some(0)]));

        let bad = [
            r#"{"player": {"sets": [[0, 1]], "probs": [1]}, "adversary": {"costs": [[1, 0, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[5]], "probs": [1]}, "adversary": {"costs": [[1, 0, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[0]], "probs": [0.5]}, "adversary": {"costs": [[1, 0, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[0]], "probs": [1]}, "adversary": {"costs": [[0.5, 0, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[0]], "probs": [1]}, "adversary": {"costs": [[1, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[0]], "probs": [1, 0]}, "adversary": {"costs": [[1, 0, 0]], "probs": [1]}}"#,
            r#"{"player": {"sets": [[0]], "probs": [1]}}"#,
        ];
        for text in bad {
            assert!(parse_strategies(text, &inst).is_err(), "{text}");
        }
    }
}
