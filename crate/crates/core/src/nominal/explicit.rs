use super::{NominalError, NominalOracle};
use crate::model::{CostVector, FeasibleSet};

/// A feasible family given as an explicit list of sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitFamily {
    n: usize,
    sets: Vec<FeasibleSet>,
    /// Same sets, sorted, for membership tests and enumeration.
    sorted: Vec<FeasibleSet>,
}

impl ExplicitFamily {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, NominalError> {
        if sets.is_empty() {
            return Err(NominalError::EmptyFamily);
        }
        let mut built = Vec::with_capacity(sets.len());
        for (index, items) in sets.iter().enumerate() {
            if let Some(&item) = items.iter().find(|&&e| e >= n) {
                return Err(NominalError::ItemOutOfRange {
                    set: index,
                    item,
                    n,
                });
            }
            let set = FeasibleSet::from_indices(n, items);
            if !built.contains(&set) {
                built.push(set);
            }
        }
        let mut sorted = built.clone();
        sorted.sort();
        Ok(ExplicitFamily {
            n,
            sets: built,
            sorted,
        })
    }

    /// The distinct sets in input order.
    pub fn sets(&self) -> &[FeasibleSet] {
        &self.sets
    }
}

impl NominalOracle for ExplicitFamily {
    fn n(&self) -> usize {
        self.n
    }

    /// Linear scan; the first minimizer in input order wins.
    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64) {
        super::minimize_over(&self.sets, costs).expect("family is nonempty")
    }

    fn is_feasible(&self, set: &FeasibleSet) -> bool {
        self.sorted.binary_search(set).is_ok()
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError> {
        if self.sorted.len() > cap {
            return Err(NominalError::CapExceeded { cap });
        }
        Ok(self.sorted.clone())
    }

    fn size_descriptor(&self) -> usize {
        self.sets.iter().map(|s| 1 + s.cardinality()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::{test_support::*, KSelection};

    fn solve(n: usize, sets: Vec<Vec<usize>>, c: &[f64]) -> (Vec<usize>, f64) {
        let f = ExplicitFamily::new(n, sets).unwrap();
        let (set, v) = f.solve(&CostVector(c.to_vec()));
        (set.to_indices(), v)
    }

    #[test]
    fn scan_examples() {
        assert_eq!(solve(2, vec![vec![0], vec![1]], &[3.0, 5.0]), (vec![0], 3.0));
        assert_eq!(solve(2, vec![vec![0, 1]], &[-1.0, 4.0]), (vec![0, 1], 3.0));
        let pairs = KSelection::new(4, 2).unwrap().enumerate(100).unwrap();
        let sets = pairs.iter().map(|s| s.to_indices()).collect();
        assert_eq!(solve(4, sets, &[4.0, 1.0, 2.0, 8.0]), (vec![1, 2], 3.0));
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert_eq!(ExplicitFamily::new(2, vec![]), Err(NominalError::EmptyFamily));
        assert!(matches!(
            ExplicitFamily::new(2, vec![vec![0, 2]]),
            Err(NominalError::ItemOutOfRange { set: 0, item: 2, n: 2 })
        ));
    }

    #[test]
    fn duplicates_collapse_and_brute_force_agrees() {
        let f = ExplicitFamily::new(
            5,
            vec![vec![0, 1], vec![2], vec![1, 0], vec![3, 4, 0], vec![], vec![1, 2, 3]],
        )
        .unwrap();
        assert_eq!(f.sets().len(), 5);
        check_against_enumeration(&f, 3, 500);
        check_feasibility_matches_enumeration(&f);
    }
}
