use super::{NominalError, NominalOracle};
use crate::model::{CostVector, FeasibleSet};

/// Select exactly `k` of `n` items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSelection {
    n: usize,
    k: usize,
}

impl KSelection {
    pub fn new(n: usize, k: usize) -> Result<Self, NominalError> {
        if k == 0 || k > n {
            return Err(NominalError::KOutOfRange { n, k });
        }
        Ok(KSelection { n, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `C(n, k)`, saturating.
    pub fn family_size(&self) -> usize {
        let k = self.k.min(self.n - self.k) as u128;
        let mut count: u128 = 1;
        for i in 0..k {
            count = count * (self.n as u128 - i) / (i + 1);
            if count > usize::MAX as u128 {
                return usize::MAX;
            }
        }
        count as usize
    }
}

impl NominalOracle for KSelection {
    fn n(&self) -> usize {
        self.n
    }

    /// The `k` cheapest items; equal costs prefer the lower index.
    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64) {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        let set = FeasibleSet::from_indices(self.n, &order[..self.k]);
        let value = crate::model::solution_cost(&set, costs);
        (set, value)
    }

    fn is_feasible(&self, set: &FeasibleSet) -> bool {
        set.n() == self.n && set.cardinality() == self.k
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError> {
        if self.family_size() > cap {
            return Err(NominalError::CapExceeded { cap });
        }
        let mut out = Vec::with_capacity(self.family_size());
        let mut combo: Vec<usize> = (0..self.k).collect();
        loop {
            out.push(FeasibleSet::from_indices(self.n, &combo));
            // advance to the next combination in lexicographic order
            let mut i = self.k;
            while i > 0 && combo[i - 1] == self.n - self.k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..self.k {
                combo[j] = combo[j - 1] + 1;
            }
        }
        Ok(out)
    }

    fn size_descriptor(&self) -> usize {
        2
    }
}
