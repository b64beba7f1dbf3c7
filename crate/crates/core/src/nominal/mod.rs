//! Nominal-problem oracles `F*(c) = min_{T ∈ F} Σ_{e ∈ T} c_e`.
//!
//! Every oracle here is exact for arbitrary-sign costs, which the hull
//! decomposition relies on. Ties are broken deterministically (lowest index
//! or lexicographically smallest index sequence) so strategies reproduce.

mod dag_path;
mod explicit;
mod selection;
mod spanning_tree;

pub use dag_path::DagPath;
pub use explicit::ExplicitFamily;
pub use selection::KSelection;
pub use spanning_tree::SpanningTree;

use thiserror::Error;

use crate::model::{CostVector, FeasibleSet};

/// Default limit on the size of any enumerated feasible family.
pub const DEFAULT_ENUM_CAP: usize = 100_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "REGRET_ENUM_CAP";

/// The enumeration cap in effect: `REGRET_ENUM_CAP` if set and parseable, else the default.
pub fn enumeration_cap() -> usize {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NominalError {
    #[error("k = {k} is out of range for n = {n} items")]
    KOutOfRange { n: usize, k: usize },
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("edge {edge} references vertex {vertex} but the graph has {vertices} vertices")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("arc graph is not acyclic")]
    NotAcyclic,
    #[error("target {target} is unreachable from source {from}")]
    Unreachable { from: usize, target: usize },
    #[error("feasible family is empty")]
    EmptyFamily,
    #[error("feasible set {set} references item {item} but there are {n} items")]
    ItemOutOfRange { set: usize, item: usize, n: usize },
    #[error("feasible family exceeds the enumeration cap of {cap}")]
    CapExceeded { cap: usize },
}

/// A nominal combinatorial problem over `n` items.
pub trait NominalOracle {
    fn n(&self) -> usize;

    /// A minimizer of `Σ_{e ∈ T} c_e` over the family together with its value.
    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64);

    fn is_feasible(&self, set: &FeasibleSet) -> bool;

    /// Every member of the family exactly once, in lexicographic order.
    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError>;

    /// Encoded size of the problem description.
    fn size_descriptor(&self) -> usize;
}

/// Brute-force `F*(c)` over an enumerated family; a test oracle and a fallback.
pub fn minimize_over(family: &[FeasibleSet], costs: &CostVector) -> Option<(FeasibleSet, f64)> {
    let mut best: Option<(FeasibleSet, f64)> = None;
    for set in family {
        let value = crate::model::solution_cost(set, costs);
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((set.clone(), value));
        }
    }
    best
}

/// The nominal families shipped with the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Nominal {
    KSelection(KSelection),
    SpanningTree(SpanningTree),
    DagPath(DagPath),
    Explicit(ExplicitFamily),
}

impl Nominal {
    fn inner(&self) -> &dyn NominalOracle {
        match self {
            Nominal::KSelection(o) => o,
            Nominal::SpanningTree(o) => o,
            Nominal::DagPath(o) => o,
            Nominal::Explicit(o) => o,
        }
    }
}

impl NominalOracle for Nominal {
    fn n(&self) -> usize {
        self.inner().n()
    }

    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64) {
        self.inner().solve(costs)
    }

    fn is_feasible(&self, set: &FeasibleSet) -> bool {
        self.inner().is_feasible(set)
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError> {
        self.inner().enumerate(cap)
    }

    fn size_descriptor(&self) -> usize {
        self.inner().size_descriptor()
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    /// Integer costs in `[-5, 5]`: exact sums, plenty of ties and negatives.
    pub fn random_costs(rng: &mut ChaCha8Rng, n: usize) -> CostVector {
        CostVector((0..n).map(|_| rng.gen_range(-5..=5) as f64).collect())
    }

    /// For many random cost vectors the oracle value equals the enumerated minimum.
    pub fn check_against_enumeration<O: NominalOracle>(oracle: &O, seed: u64, trials: usize) {
        let family = oracle.enumerate(DEFAULT_ENUM_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let c = random_costs(&mut rng, oracle.n());
            let (set, value) = oracle.solve(&c);
            let (_, brute) = minimize_over(&family, &c).unwrap();
            assert_eq!(value, brute, "costs {:?}", c.0);
            assert!(oracle.is_feasible(&set));
            assert_eq!(crate::model::solution_cost(&set, &c), value);
            // positive scaling keeps the minimizer under the fixed tie-break
            let doubled = CostVector(c.0.iter().map(|x| 2.0 * x).collect());
            assert_eq!(oracle.solve(&doubled).0, set);
        }
    }

    /// `is_feasible` accepts exactly the enumerated sets, checked over all `2^n` subsets.
    pub fn check_feasibility_matches_enumeration<O: NominalOracle>(oracle: &O) {
        let n = oracle.n();
        assert!(n <= 16);
        let family = oracle.enumerate(DEFAULT_ENUM_CAP).unwrap();
        let mut sorted = family.clone();
        sorted.sort();
        assert_eq!(sorted, family, "enumeration must be lexicographic");
        sorted.dedup();
        assert_eq!(sorted.len(), family.len(), "enumeration repeats a set");
        for mask in 0u32..(1 << n) {
            let items: Vec<usize> = (0..n).filter(|e| mask >> e & 1 == 1).collect();
            let set = FeasibleSet::from_indices(n, &items);
            assert_eq!(
                oracle.is_feasible(&set),
                family.binary_search(&set).is_ok(),
                "set {set}"
            );
        }
    }
}
