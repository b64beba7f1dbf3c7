//! Domain types shared by every solver, and the elementary regret arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::nominal::NominalOracle;

/// Probabilities below this are treated as LP round-off and dropped.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Tolerance on `Σ probabilities = 1` when validating user supplied strategies.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("strategy has an empty support")]
    EmptySupport,
    #[error("probability {prob} at support entry {index} is negative or not finite")]
    BadProbability { index: usize, prob: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("support entry {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("support entry {index} is not a feasible set")]
    Infeasible { index: usize },
    #[error("support entry {index} is outside the uncertainty set")]
    OutsideUncertainty { index: usize },
    #[error("support entry {index} references item {item} but the instance has {n} items")]
    ItemOutOfRange { index: usize, item: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("set is not a member of the feasible family")]
pub struct InfeasibleSetError;

/// A cost vector `c = (c_1, ..., c_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostVector(pub Vec<f64>);

impl CostVector {
    pub fn new(costs: Vec<f64>) -> Self {
        CostVector(costs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl std::ops::Index<usize> for CostVector {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}

/// A subset of the items, stored as its characteristic vector.
///
/// Ordering compares the sorted index lists lexicographically, so `{0} < {0,1} < {1}`.
/// This is the tie-break order used wherever "lexicographically smallest set" is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeasibleSet {
    indicator: Vec<bool>,
}

impl FeasibleSet {
    pub fn empty(n: usize) -> Self {
        FeasibleSet {
            indicator: vec![false; n],
        }
    }

    pub fn from_indicator(indicator: Vec<bool>) -> Self {
        FeasibleSet { indicator }
    }

    /// Panics if an index is `>= n`.
    pub fn from_indices(n: usize, items: &[usize]) -> Self {
        let mut indicator = vec![false; n];
        for &e in items {
            indicator[e] = true;
        }
        FeasibleSet { indicator }
    }

    /// Number of items in the ground set.
    pub fn n(&self) -> usize {
        self.indicator.len()
    }

    /// Number of selected items.
    pub fn cardinality(&self) -> usize {
        self.indicator.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.indicator[e]
    }

    pub fn insert(&mut self, e: usize) {
        self.indicator[e] = true;
    }

    pub fn indicator(&self) -> &[bool] {
        &self.indicator
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indicator
            .iter()
            .enumerate()
            .filter_map(|(e, &b)| b.then_some(e))
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.indices().collect()
    }

    /// The indicator as a 0/1 real vector.
    pub fn to_vector(&self) -> Vec<f64> {
        self.indicator
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn complement(&self) -> FeasibleSet {
        FeasibleSet {
            indicator: self.indicator.iter().map(|b| !b).collect(),
        }
    }
}

impl Ord for FeasibleSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices()
            .cmp(other.indices())
            .then(self.n().cmp(&other.n()))
    }
}

impl PartialOrd for FeasibleSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.indices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a sorted index list; the ground set size comes from context.
impl Serialize for FeasibleSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.indices())
    }
}

/// Drops tiny weights, merges duplicates and rescales to a distribution.
fn normalize_support<K: PartialEq>(entries: Vec<(K, f64)>) -> Vec<(K, f64)> {
    let mut merged: Vec<(K, f64)> = Vec::with_capacity(entries.len());
    for (key, prob) in entries {
        let prob = if prob.is_finite() { prob.max(0.0) } else { 0.0 };
        match merged.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 += prob,
            None => merged.push((key, prob)),
        }
    }
    merged.retain(|(_, p)| *p >= PROBABILITY_FLOOR);
    let total: f64 = merged.iter().map(|(_, p)| p).sum();
    if total > 0.0 {
        for entry in &mut merged {
            entry.1 /= total;
        }
    }
    merged
}

fn check_probabilities(probs: impl Iterator<Item = f64>) -> Result<(), StrategyError> {
    let mut sum = 0.0;
    let mut count = 0;
    for (index, prob) in probs.enumerate() {
        if !prob.is_finite() || prob < 0.0 {
            return Err(StrategyError::BadProbability { index, prob });
        }
        sum += prob;
        count += 1;
    }
    if count == 0 {
        return Err(StrategyError::EmptySupport);
    }
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(StrategyError::NotNormalized { sum });
    }
    Ok(())
}

/// Finite-support distribution over feasible sets.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerMixedStrategy {
    support: Vec<(FeasibleSet, f64)>,
}

impl PlayerMixedStrategy {
    /// Validates a user-supplied distribution, then applies the usual clean-up.
    pub fn new(support: Vec<(FeasibleSet, f64)>) -> Result<Self, StrategyError> {
        check_probabilities(support.iter().map(|(_, p)| *p))?;
        Ok(Self::from_weights(support))
    }

    /// Builds a strategy from nonnegative weights (e.g. LP duals), rescaling them.
    ///
    /// Panics if no weight survives the probability floor.
    pub fn from_weights(weights: Vec<(FeasibleSet, f64)>) -> Self {
        let support = normalize_support(weights);
        assert!(!support.is_empty(), "mixed strategy with no positive weight");
        PlayerMixedStrategy { support }
    }

    pub fn pure(set: FeasibleSet) -> Self {
        PlayerMixedStrategy {
            support: vec![(set, 1.0)],
        }
    }

    pub fn support(&self) -> &[(FeasibleSet, f64)] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn n(&self) -> usize {
        self.support[0].0.n()
    }

    pub fn probability_of(&self, set: &FeasibleSet) -> f64 {
        self.support
            .iter()
            .find(|(t, _)| t == set)
            .map_or(0.0, |(_, p)| *p)
    }
}

/// Where an adversary cost vector came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CostSource {
    /// Scenario `S` of a discrete instance.
    Scenario(usize),
    /// Extreme vector `c^A`: lower bound on `A`, upper bound elsewhere.
    Extreme(FeasibleSet),
    /// Any other vector inside the uncertainty set (e.g. read from a file).
    Given,
}

/// One pure adversary strategy: a cost vector and its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryPure {
    pub costs: CostVector,
    pub source: CostSource,
}

impl AdversaryPure {
    pub fn scenario(index: usize, costs: CostVector) -> Self {
        AdversaryPure {
            costs,
            source: CostSource::Scenario(index),
        }
    }

    pub fn scenario_index(&self) -> Option<usize> {
        match self.source {
            CostSource::Scenario(s) => Some(s),
            _ => None,
        }
    }
}

/// Finite-support distribution over cost vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryMixedStrategy {
    support: Vec<(AdversaryPure, f64)>,
}

impl AdversaryMixedStrategy {
    pub fn new(support: Vec<(AdversaryPure, f64)>) -> Result<Self, StrategyError> {
        check_probabilities(support.iter().map(|(_, p)| *p))?;
        Ok(Self::from_weights(support))
    }

    /// Panics if no weight survives the probability floor.
    pub fn from_weights(weights: Vec<(AdversaryPure, f64)>) -> Self {
        // Duplicates are merged by cost vector; provenance of the first copy wins.
        let keyed: Vec<(CostKey, f64)> = weights
            .into_iter()
            .map(|(pure, p)| (CostKey(pure), p))
            .collect();
        let support: Vec<(AdversaryPure, f64)> = normalize_support(keyed)
            .into_iter()
            .map(|(k, p)| (k.0, p))
            .collect();
        assert!(!support.is_empty(), "mixed strategy with no positive weight");
        AdversaryMixedStrategy { support }
    }

    pub fn pure(pure: AdversaryPure) -> Self {
        AdversaryMixedStrategy {
            support: vec![(pure, 1.0)],
        }
    }

    pub fn support(&self) -> &[(AdversaryPure, f64)] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// The averaged cost vector `d = Σ_c w_c c`.
    pub fn mean_costs(&self) -> CostVector {
        let n = self.support[0].0.costs.len();
        let mut d = vec![0.0; n];
        for (pure, w) in &self.support {
            for (de, ce) in d.iter_mut().zip(pure.costs.as_slice()) {
                *de += w * ce;
            }
        }
        CostVector(d)
    }
}

struct CostKey(AdversaryPure);

impl PartialEq for CostKey {
    fn eq(&self, other: &Self) -> bool {
        self.0.costs == other.0.costs
    }
}

/// Per-item selection probabilities `p_e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarginalVector(pub Vec<f64>);

impl MarginalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Componentwise `0 <= p_e <= 1` within `tol`.
    pub fn in_unit_box(&self, tol: f64) -> bool {
        self.0.iter().all(|&p| p >= -tol && p <= 1.0 + tol)
    }

    pub fn max_abs_diff(&self, other: &MarginalVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Outcome of a randomized minmax regret solve.
#[derive(Debug, Clone)]
pub struct GameSolution {
    /// Game value `Z_R = Z_AR`.
    pub value: f64,
    pub player: PlayerMixedStrategy,
    pub marginal: MarginalVector,
    pub adversary: AdversaryMixedStrategy,
    pub iterations: usize,
    /// Upper best-response value minus lower best-response value.
    pub certified_gap: f64,
    /// `R̄_max` of the player strategy (an upper bound on the value).
    pub upper_bound: f64,
    /// `R̄_min` of the adversary strategy (a lower bound on the value).
    pub lower_bound: f64,
}

/// `F(T, c) = Σ_{e ∈ T} c_e`.
pub fn solution_cost(set: &FeasibleSet, costs: &CostVector) -> f64 {
    debug_assert_eq!(set.n(), costs.len());
    set.indices().map(|e| costs[e]).sum()
}

/// `R(T, c) = F(T, c) - F*(c)`.
pub fn regret<O: NominalOracle + ?Sized>(
    set: &FeasibleSet,
    costs: &CostVector,
    oracle: &O,
) -> Result<f64, InfeasibleSetError> {
    if !oracle.is_feasible(set) {
        return Err(InfeasibleSetError);
    }
    let (_, best) = oracle.solve(costs);
    Ok(solution_cost(set, costs) - best)
}

/// `R̄(y, w) = Σ_T Σ_c y_T w_c R(T, c)`.
pub fn expected_regret<O: NominalOracle + ?Sized>(
    player: &PlayerMixedStrategy,
    adversary: &AdversaryMixedStrategy,
    oracle: &O,
) -> Result<f64, InfeasibleSetError> {
    let optima: Vec<f64> = adversary
        .support()
        .iter()
        .map(|(pure, _)| oracle.solve(&pure.costs).1)
        .collect();
    let mut total = 0.0;
    for (set, y) in player.support() {
        if !oracle.is_feasible(set) {
            return Err(InfeasibleSetError);
        }
        for ((pure, w), best) in adversary.support().iter().zip(&optima) {
            total += y * w * (solution_cost(set, &pure.costs) - best);
        }
    }
    Ok(total)
}

/// `p_e = Σ_{T ∋ e} y_T`.
pub fn marginal_of_strategy(player: &PlayerMixedStrategy) -> MarginalVector {
    let mut p = vec![0.0; player.n()];
    for (set, y) in player.support() {
        for e in set.indices() {
            p[e] += y;
        }
    }
    for pe in &mut p {
        *pe = pe.clamp(0.0, 1.0);
    }
    MarginalVector(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::KSelection;

    fn set(n: usize, items: &[usize]) -> FeasibleSet {
        FeasibleSet::from_indices(n, items)
    }

    #[test]
    fn solution_cost_sums_selected_items() {
        let c = CostVector(vec![3.0, 5.0]);
        assert_eq!(solution_cost(&set(2, &[0]), &c), 3.0);
        assert_eq!(solution_cost(&set(2, &[]), &c), 0.0);
        assert_eq!(solution_cost(&set(2, &[0, 1]), &c), 8.0);
    }

    #[test]
    fn regret_examples() {
        let one_of_two = KSelection::new(2, 1).unwrap();
        let c = CostVector(vec![3.0, 5.0]);
        assert_eq!(regret(&set(2, &[1]), &c, &one_of_two).unwrap(), 2.0);
        assert_eq!(regret(&set(2, &[0]), &c, &one_of_two).unwrap(), 0.0);

        // brute force: two-subsets of (1,2,4) cost 3, 5, 6
        let two_of_three = KSelection::new(3, 2).unwrap();
        let c = CostVector(vec![1.0, 2.0, 4.0]);
        let brute = [[0, 1], [0, 2], [1, 2]]
            .iter()
            .map(|s| solution_cost(&set(3, s), &c))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(brute, 3.0);
        assert_eq!(regret(&set(3, &[0, 2]), &c, &two_of_three).unwrap(), 5.0 - brute);
    }

    #[test]
    fn regret_rejects_infeasible_set() {
        let one_of_two = KSelection::new(2, 1).unwrap();
        let c = CostVector(vec![3.0, 5.0]);
        assert!(regret(&set(2, &[0, 1]), &c, &one_of_two).is_err());
    }

    #[test]
    fn expected_regret_examples() {
        let oracle = KSelection::new(2, 1).unwrap();
        let c = CostVector(vec![0.0, 1.0]);
        let w = AdversaryMixedStrategy::pure(AdversaryPure {
            costs: c.clone(),
            source: CostSource::Given,
        });
        let y_opt = PlayerMixedStrategy::pure(set(2, &[0]));
        assert_eq!(expected_regret(&y_opt, &w, &oracle).unwrap(), 0.0);

        // 0.5 * R({e1}, c) + 0.5 * R({e2}, c) = 0.5 * 0 + 0.5 * 1
        let y = PlayerMixedStrategy::new(vec![(set(2, &[0]), 0.5), (set(2, &[1]), 0.5)]).unwrap();
        assert_eq!(expected_regret(&y, &w, &oracle).unwrap(), 0.5);
    }

    #[test]
    fn marginal_examples() {
        let y = PlayerMixedStrategy::new(vec![(set(2, &[0]), 0.5), (set(2, &[1]), 0.5)]).unwrap();
        assert_eq!(marginal_of_strategy(&y).0, vec![0.5, 0.5]);

        let y = PlayerMixedStrategy::pure(set(3, &[0, 2]));
        assert_eq!(marginal_of_strategy(&y).0, vec![1.0, 0.0, 1.0]);

        let y = PlayerMixedStrategy::new(vec![(set(3, &[0, 1]), 0.25), (set(3, &[1, 2]), 0.75)])
            .unwrap();
        assert_eq!(marginal_of_strategy(&y).0, vec![0.25, 1.0, 0.75]);
    }

    #[test]
    fn strategy_cleanup_drops_ghosts_and_merges() {
        let y = PlayerMixedStrategy::from_weights(vec![
            (set(2, &[0]), 0.5),
            (set(2, &[1]), 1e-14),
            (set(2, &[0]), 0.5),
        ]);
        assert_eq!(y.support_size(), 1);
        assert_eq!(y.support()[0].1, 1.0);
    }

    #[test]
    fn strategy_validation() {
        assert_eq!(
            PlayerMixedStrategy::new(vec![]).unwrap_err(),
            StrategyError::EmptySupport
        );
        assert!(matches!(
            PlayerMixedStrategy::new(vec![(set(2, &[0]), 0.7)]),
            Err(StrategyError::NotNormalized { .. })
        ));
        assert!(matches!(
            PlayerMixedStrategy::new(vec![(set(2, &[0]), 1.5), (set(2, &[1]), -0.5)]),
            Err(StrategyError::BadProbability { index: 1, .. })
        ));
    }

    #[test]
    fn set_order_is_lexicographic_on_indices() {
        let a = set(3, &[0]);
        let b = set(3, &[0, 1]);
        let c = set(3, &[1]);
        assert!(a < b && b < c);
        assert_eq!(set(3, &[0, 2]).to_string(), "{0,2}");
    }
}
