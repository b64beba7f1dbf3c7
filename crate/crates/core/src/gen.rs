//! Seeded random instances and the two gap instances.
//!
//! Costs, scenario entries and interval endpoints are drawn uniformly from
//! `[0, 10]`; an interval is the sorted pair of two draws.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{InstanceDescription, NominalSpec, UncertaintySpec};

pub const COST_RANGE: (f64, f64) = (0.0, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    KSelection,
    SpanningTree,
    DagPath,
    Explicit,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::KSelection,
        Family::SpanningTree,
        Family::DagPath,
        Family::Explicit,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::KSelection => "k-selection",
            Family::SpanningTree => "spanning-tree",
            Family::DagPath => "dag-path",
            Family::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UncertaintyKind {
    Interval,
    Scenarios(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    /// Item count: items for selection/explicit, edges or arcs for graphs.
    pub n: usize,
    /// Selection size; drawn from `1..=n` when absent.
    pub k: Option<usize>,
    pub uncertainty: UncertaintyKind,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
}

fn bad(msg: impl Into<String>) -> GenError {
    GenError::BadParams(msg.into())
}

/// The 1-of-k instance with scenario `S` charging 1 for item `S` and 0 elsewhere.
pub fn tight_discrete(k: usize) -> Result<InstanceDescription, GenError> {
    if k == 0 {
        return Err(bad("tight-discrete needs k >= 1"));
    }
    let costs = (0..k)
        .map(|s| (0..k).map(|e| if e == s { 1.0 } else { 0.0 }).collect())
        .collect();
    Ok(InstanceDescription {
        name: format!("tight-discrete-{k}"),
        n: k,
        nominal: NominalSpec::KSelection { n: k, k: 1 },
        uncertainty: UncertaintySpec::Scenarios { costs },
    })
}

/// The 1-of-2 instance with both costs in `[0, 1]`.
pub fn tight_interval() -> InstanceDescription {
    InstanceDescription {
        name: "tight-interval".to_string(),
        n: 2,
        nominal: NominalSpec::KSelection { n: 2, k: 1 },
        uncertainty: UncertaintySpec::Interval {
            lower: vec![0.0, 0.0],
            upper: vec![1.0, 1.0],
        },
    }
}

/// Smallest vertex count whose complete (di)graph has at least `edges` pairs.
fn vertices_for(edges: usize) -> usize {
    let mut v = 2;
    while v * (v - 1) / 2 < edges {
        v += 1;
    }
    v
}

fn all_pairs(v: usize) -> Vec<(usize, usize)> {
    (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .collect()
}

/// Connected simple graph: a random tree plus random extra edges, shuffled.
fn random_graph(rng: &mut ChaCha8Rng, edges: usize) -> (usize, Vec<(usize, usize)>) {
    let v = vertices_for(edges);
    let mut order: Vec<usize> = (0..v).collect();
    order.shuffle(rng);
    let mut chosen: Vec<(usize, usize)> = (1..v)
        .map(|i| {
            let j = rng.gen_range(0..i);
            let (a, b) = (order[i], order[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut rest: Vec<(usize, usize)> = all_pairs(v)
        .into_iter()
        .filter(|p| !chosen.contains(p))
        .collect();
    rest.shuffle(rng);
    chosen.extend(rest.into_iter().take(edges - (v - 1)));
    chosen.shuffle(rng);
    (v, chosen)
}

/// Forward arcs over vertices `0..v` containing the path `0 → 1 → … → v-1`.
fn random_dag(rng: &mut ChaCha8Rng, arcs: usize) -> (usize, Vec<(usize, usize)>) {
    let v = vertices_for(arcs);
    let mut chosen: Vec<(usize, usize)> = (1..v).map(|i| (i - 1, i)).collect();
    let mut rest: Vec<(usize, usize)> = all_pairs(v)
        .into_iter()
        .filter(|&(a, b)| b != a + 1)
        .collect();
    rest.shuffle(rng);
    chosen.extend(rest.into_iter().take(arcs - (v - 1)));
    chosen.shuffle(rng);
    (v, chosen)
}

fn random_sets(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let count = rng.gen_range(2..=12);
    (0..count)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect()
}

fn draw(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(COST_RANGE.0..=COST_RANGE.1)
}

pub fn generate(spec: &GenSpec) -> Result<InstanceDescription, GenError> {
    let n = spec.n;
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let nominal = match spec.family {
        Family::KSelection => {
            let k = match spec.k {
                Some(k) if (1..=n).contains(&k) => k,
                Some(k) => return Err(bad(format!("k = {k} must lie in 1..={n}"))),
                None => rng.gen_range(1..=n),
            };
            NominalSpec::KSelection { n, k }
        }
        Family::SpanningTree => {
            let (vertices, edges) = random_graph(&mut rng, n);
            NominalSpec::SpanningTree { vertices, edges }
        }
        Family::DagPath => {
            let (vertices, arcs) = random_dag(&mut rng, n);
            NominalSpec::DagPath {
                vertices,
                arcs,
                source: 0,
                target: vertices - 1,
            }
        }
        Family::Explicit => NominalSpec::Explicit {
            sets: random_sets(&mut rng, n),
        },
    };
    let uncertainty = match spec.uncertainty {
        UncertaintyKind::Interval => {
            let (mut lower, mut upper) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for _ in 0..n {
                let (a, b) = (draw(&mut rng), draw(&mut rng));
                lower.push(a.min(b));
                upper.push(a.max(b));
            }
            UncertaintySpec::Interval { lower, upper }
        }
        UncertaintyKind::Scenarios(0) => return Err(bad("scenario count must be at least 1")),
        UncertaintyKind::Scenarios(k) => UncertaintySpec::Scenarios {
            costs: (0..k)
                .map(|_| (0..n).map(|_| draw(&mut rng)).collect())
                .collect(),
        },
    };
    let kind = match spec.uncertainty {
        UncertaintyKind::Interval => "interval".to_string(),
        UncertaintyKind::Scenarios(k) => format!("{k}-scenario"),
    };
    Ok(InstanceDescription {
        name: format!("{}-{}-n{}-seed{}", spec.family.label(), kind, n, spec.seed),
        n,
        nominal,
        uncertainty,
    })
}

/// A small instance for the randomized property suites.
///
/// All families have `n ≤ 10`, which keeps `|F| ≤ 252` so brute-force game
/// solving stays cheap; scenario instances carry `2..=4` scenarios.
pub fn suite_instance(family: Family, interval: bool, seed: u64) -> InstanceDescription {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0005_eed5_u64.wrapping_mul(family as u64 + 1));
    let n = match family {
        Family::KSelection => rng.gen_range(2..=10),
        Family::SpanningTree => rng.gen_range(3..=10),
        Family::DagPath => rng.gen_range(3..=10),
        Family::Explicit => rng.gen_range(3..=10),
    };
    let uncertainty = if interval {
        UncertaintyKind::Interval
    } else {
        UncertaintyKind::Scenarios(rng.gen_range(2..=4))
    };
    let spec = GenSpec {
        family,
        n,
        k: None,
        uncertainty,
        seed: rng.gen(),
    };
    generate(&spec).expect("suite parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;
    use crate::nominal::NominalOracle;

    #[test]
    fn tight_instances_have_the_stated_shape() {
        let d = tight_discrete(3).unwrap();
        let UncertaintySpec::Scenarios { costs } = &d.uncertainty else {
            panic!("expected scenarios")
        };
        assert_eq!(costs[1], vec![0.0, 1.0, 0.0]);
        assert!(validate_instance(d.clone()).is_ok());
        assert!(tight_discrete(0).is_err());
        assert!(validate_instance(tight_interval()).is_ok());
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        for family in Family::ALL {
            for uncertainty in [UncertaintyKind::Interval, UncertaintyKind::Scenarios(3)] {
                for n in 1..=10 {
                    let spec = GenSpec {
                        family,
                        n,
                        k: None,
                        uncertainty,
                        seed: 11 + n as u64,
                    };
                    let a = generate(&spec).unwrap();
                    assert_eq!(a, generate(&spec).unwrap());
                    let inst = validate_instance(a).unwrap_or_else(|e| panic!("{family:?} {n}: {e}"));
                    assert_eq!(inst.n(), n);
                    if let Some((lo, hi)) = inst.intervals() {
                        for e in 0..n {
                            assert!(0.0 <= lo[e] && lo[e] <= hi[e] && hi[e] <= 10.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let spec = GenSpec {
            family: Family::KSelection,
            n: 3,
            k: Some(4),
            uncertainty: UncertaintyKind::Interval,
            seed: 0,
        };
        assert!(generate(&spec).is_err());
        let spec = GenSpec {
            k: None,
            uncertainty: UncertaintyKind::Scenarios(0),
            ..spec
        };
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn suite_families_stay_small() {
        for family in Family::ALL {
            for seed in 0..50 {
                for interval in [false, true] {
                    let inst = validate_instance(suite_instance(family, interval, seed)).unwrap();
                    assert!(inst.n() <= 10);
                    let sets = inst.oracle().enumerate(10_000).unwrap();
                    assert!(sets.len() <= 252, "{family:?}: {}", sets.len());
                }
            }
        }
    }
}
