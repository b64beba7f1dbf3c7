//! Problem instances: the external JSON description and its validated form.
//!
//! The JSON document has exactly four fields:
//!
//! ```json
//! {
//!   "name": "tight-interval",
//!   "n": 2,
//!   "nominal": { "type": "k-selection", "n": 2, "k": 1 },
//!   "uncertainty": { "type": "interval", "lower": [0, 0], "upper": [1, 1] }
//! }
//! ```
//!
//! `nominal` is one of `k-selection {n, k}`, `spanning-tree {vertices, edges}`,
//! `dag-path {vertices, arcs, source, target}` or `explicit {sets}`; edges and
//! arcs are `[u, v]` pairs and item `e` is edge/arc `e`. `uncertainty` is either
//! `interval {lower, upper}` or `scenarios {costs}` with one cost vector per
//! scenario. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AdversaryPure, CostSource, CostVector, FeasibleSet};
use crate::nominal::{
    DagPath, ExplicitFamily, KSelection, Nominal, NominalError, NominalOracle, SpanningTree,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDescription {
    pub name: String,
    pub n: usize,
    pub nominal: NominalSpec,
    pub uncertainty: UncertaintySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NominalSpec {
    KSelection {
        n: usize,
        k: usize,
    },
    SpanningTree {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    DagPath {
        vertices: usize,
        arcs: Vec<(usize, usize)>,
        source: usize,
        target: usize,
    },
    Explicit {
        sets: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum UncertaintySpec {
    Interval { lower: Vec<f64>, upper: Vec<f64> },
    Scenarios { costs: Vec<Vec<f64>> },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("malformed instance document: {0}")]
    Parse(String),
    #[error("instance must have at least one item")]
    NoItems,
    #[error("{what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("lower > upper for item {item}: {lower} > {upper}")]
    LowerAboveUpper { item: usize, lower: f64, upper: f64 },
    #[error("non-finite cost in {what} at item {item}")]
    NonFinite { what: String, item: usize },
    #[error("scenario list is empty")]
    NoScenarios,
    #[error("invalid nominal problem: {0}")]
    Nominal(#[from] NominalError),
}

/// Cost uncertainty of a validated instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Uncertainty {
    Interval {
        lower: CostVector,
        upper: CostVector,
    },
    Scenarios {
        scenarios: Vec<CostVector>,
        /// `F*(c^S)` for each scenario, computed once.
        optima: Vec<f64>,
    },
}

/// A validated instance; immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    description: InstanceDescription,
    nominal: Nominal,
    uncertainty: Uncertainty,
}

fn check_length(what: impl Into<String>, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected != found {
        return Err(InstanceError::DimensionMismatch {
            what: what.into(),
            expected,
            found,
        });
    }
    Ok(())
}

fn check_finite(what: &str, costs: &[f64]) -> Result<(), InstanceError> {
    match costs.iter().position(|c| !c.is_finite()) {
        Some(item) => Err(InstanceError::NonFinite {
            what: what.to_string(),
            item,
        }),
        None => Ok(()),
    }
}

/// Checks every instance invariant and builds the nominal oracle.
pub fn validate_instance(raw: InstanceDescription) -> Result<Instance, InstanceError> {
    let n = raw.n;
    if n == 0 {
        return Err(InstanceError::NoItems);
    }
    let nominal = match &raw.nominal {
        NominalSpec::KSelection { n: items, k } => {
            check_length("k-selection item count", n, *items)?;
            Nominal::KSelection(KSelection::new(*items, *k)?)
        }
        NominalSpec::SpanningTree { vertices, edges } => {
            check_length("spanning-tree edge list", n, edges.len())?;
            Nominal::SpanningTree(SpanningTree::new(*vertices, edges.clone())?)
        }
        NominalSpec::DagPath {
            vertices,
            arcs,
            source,
            target,
        } => {
            check_length("dag-path arc list", n, arcs.len())?;
            Nominal::DagPath(DagPath::new(*vertices, arcs.clone(), *source, *target)?)
        }
        NominalSpec::Explicit { sets } => Nominal::Explicit(ExplicitFamily::new(n, sets.clone())?),
    };

    let uncertainty = match &raw.uncertainty {
        UncertaintySpec::Interval { lower, upper } => {
            check_length("lower bounds", n, lower.len())?;
            check_length("upper bounds", n, upper.len())?;
            check_finite("lower bounds", lower)?;
            check_finite("upper bounds", upper)?;
            if let Some(item) = (0..n).find(|&e| lower[e] > upper[e]) {
                return Err(InstanceError::LowerAboveUpper {
                    item,
                    lower: lower[item],
                    upper: upper[item],
                });
            }
            Uncertainty::Interval {
                lower: CostVector(lower.clone()),
                upper: CostVector(upper.clone()),
            }
        }
        UncertaintySpec::Scenarios { costs } => {
            if costs.is_empty() {
                return Err(InstanceError::NoScenarios);
            }
            let mut scenarios = Vec::with_capacity(costs.len());
            for (s, c) in costs.iter().enumerate() {
                check_length(format!("scenario {s}"), n, c.len())?;
                check_finite(&format!("scenario {s}"), c)?;
                scenarios.push(CostVector(c.clone()));
            }
            let optima = scenarios.iter().map(|c| nominal.solve(c).1).collect();
            Uncertainty::Scenarios { scenarios, optima }
        }
    };

    Ok(Instance {
        description: raw,
        nominal,
        uncertainty,
    })
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let raw: InstanceDescription =
            serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        validate_instance(raw)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.description).expect("descriptions always serialize")
    }

    pub fn name(&self) -> &str {
        &self.description.name
    }

    pub fn n(&self) -> usize {
        self.description.n
    }

    pub fn description(&self) -> &InstanceDescription {
        &self.description
    }

    pub fn oracle(&self) -> &Nominal {
        &self.nominal
    }

    pub fn uncertainty(&self) -> &Uncertainty {
        &self.uncertainty
    }

    pub fn is_interval(&self) -> bool {
        matches!(self.uncertainty, Uncertainty::Interval { .. })
    }

    /// Bounds `(lower, upper)` of an interval instance.
    pub fn intervals(&self) -> Option<(&CostVector, &CostVector)> {
        match &self.uncertainty {
            Uncertainty::Interval { lower, upper } => Some((lower, upper)),
            Uncertainty::Scenarios { .. } => None,
        }
    }

    /// Scenario cost vectors and their nominal optima.
    pub fn scenarios(&self) -> Option<(&[CostVector], &[f64])> {
        match &self.uncertainty {
            Uncertainty::Scenarios { scenarios, optima } => Some((scenarios, optima)),
            Uncertainty::Interval { .. } => None,
        }
    }

    pub fn scenario_count(&self) -> Option<usize> {
        self.scenarios().map(|(s, _)| s.len())
    }

    /// `F*(c)`; served from the cache for scenario vectors.
    pub fn nominal_optimum(&self, pure: &AdversaryPure) -> f64 {
        if let (CostSource::Scenario(s), Some((_, optima))) = (&pure.source, self.scenarios()) {
            return optima[*s];
        }
        self.nominal.solve(&pure.costs).1
    }

    /// Scenario `s` as an adversary pure strategy.
    pub fn scenario_pure(&self, s: usize) -> Option<AdversaryPure> {
        let (scenarios, _) = self.scenarios()?;
        scenarios
            .get(s)
            .map(|c| AdversaryPure::scenario(s, c.clone()))
    }

    /// Whether `costs` lies in the uncertainty set (within `tol` for intervals,
    /// exact match for scenarios).
    pub fn contains_costs(&self, costs: &CostVector, tol: f64) -> bool {
        if costs.len() != self.n() || !costs.is_finite() {
            return false;
        }
        match &self.uncertainty {
            Uncertainty::Interval { lower, upper } => (0..self.n())
                .all(|e| costs[e] >= lower[e] - tol && costs[e] <= upper[e] + tol),
            Uncertainty::Scenarios { scenarios, .. } => scenarios.iter().any(|s| s == costs),
        }
    }

    /// Labels a cost vector read from outside: scenario index when it matches one.
    pub fn classify_costs(&self, costs: CostVector) -> AdversaryPure {
        if let Some((scenarios, _)) = self.scenarios() {
            if let Some(s) = scenarios.iter().position(|c| *c == costs) {
                return AdversaryPure::scenario(s, costs);
            }
        }
        AdversaryPure {
            costs,
            source: CostSource::Given,
        }
    }

    /// Builds a feasible set from item indices, checking range and membership.
    pub fn feasible_set(&self, items: &[usize]) -> Option<FeasibleSet> {
        if items.iter().any(|&e| e >= self.n()) {
            return None;
        }
        let set = FeasibleSet::from_indices(self.n(), items);
        self.nominal.is_feasible(&set).then_some(set)
    }
}
