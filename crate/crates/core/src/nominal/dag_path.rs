use super::{NominalError, NominalOracle};
use crate::model::{CostVector, FeasibleSet};

/// Source-target paths in a directed acyclic graph; item `a` is arc `a`.
///
/// Acyclicity is what makes the oracle exact under negative arc costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagPath {
    vertices: usize,
    arcs: Vec<(usize, usize)>,
    source: usize,
    target: usize,
    /// Vertices in topological order.
    topo: Vec<usize>,
    /// Outgoing arc indices per vertex, ascending.
    out_arcs: Vec<Vec<usize>>,
    /// Whether the target is reachable from each vertex.
    reaches_target: Vec<bool>,
}

impl DagPath {
    pub fn new(
        vertices: usize,
        arcs: Vec<(usize, usize)>,
        source: usize,
        target: usize,
    ) -> Result<Self, NominalError> {
        if vertices == 0 {
            return Err(NominalError::NoVertices);
        }
        for (edge, &(u, v)) in arcs.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= vertices {
                    return Err(NominalError::VertexOutOfRange {
                        edge,
                        vertex,
                        vertices,
                    });
                }
            }
        }
        for vertex in [source, target] {
            if vertex >= vertices {
                return Err(NominalError::VertexOutOfRange {
                    edge: usize::MAX,
                    vertex,
                    vertices,
                });
            }
        }

        let mut out_arcs = vec![Vec::new(); vertices];
        let mut indegree = vec![0usize; vertices];
        for (a, &(u, v)) in arcs.iter().enumerate() {
            out_arcs[u].push(a);
            indegree[v] += 1;
        }

        // Kahn's algorithm
        let mut topo = Vec::with_capacity(vertices);
        let mut ready: Vec<usize> = (0..vertices).filter(|&v| indegree[v] == 0).collect();
        while let Some(u) = ready.pop() {
            topo.push(u);
            for &a in &out_arcs[u] {
                let v = arcs[a].1;
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.push(v);
                }
            }
        }
        if topo.len() != vertices {
            return Err(NominalError::NotAcyclic);
        }

        let mut reaches_target = vec![false; vertices];
        reaches_target[target] = true;
        for &u in topo.iter().rev() {
            if out_arcs[u].iter().any(|&a| reaches_target[arcs[a].1]) {
                reaches_target[u] = true;
            }
        }
        if !reaches_target[source] {
            return Err(NominalError::Unreachable { from: source, target });
        }

        Ok(DagPath {
            vertices,
            arcs,
            source,
            target,
            topo,
            out_arcs,
            reaches_target,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    fn collect_paths(
        &self,
        at: usize,
        path: &mut Vec<usize>,
        cap: usize,
        out: &mut Vec<FeasibleSet>,
    ) -> Result<(), NominalError> {
        if at == self.target {
            if out.len() >= cap {
                return Err(NominalError::CapExceeded { cap });
            }
            out.push(FeasibleSet::from_indices(self.arcs.len(), path));
            return Ok(());
        }
        for &a in &self.out_arcs[at] {
            let next = self.arcs[a].1;
            if self.reaches_target[next] {
                path.push(a);
                self.collect_paths(next, path, cap, out)?;
                path.pop();
            }
        }
        Ok(())
    }
}

impl NominalOracle for DagPath {
    fn n(&self) -> usize {
        self.arcs.len()
    }

    /// Reverse-topological relaxation of distances to the target, then a greedy
    /// walk taking the lowest-index tight arc at each vertex. The walk yields the
    /// lexicographically smallest arc sequence among minimum-cost paths.
    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64) {
        let mut dist: Vec<Option<f64>> = vec![None; self.vertices];
        dist[self.target] = Some(0.0);
        for &u in self.topo.iter().rev() {
            if u == self.target {
                continue;
            }
            for &a in &self.out_arcs[u] {
                if let Some(tail) = dist[self.arcs[a].1] {
                    let through = costs[a] + tail;
                    if dist[u].is_none_or(|d| through < d) {
                        dist[u] = Some(through);
                    }
                }
            }
        }

        let mut path = FeasibleSet::empty(self.arcs.len());
        let mut at = self.source;
        while at != self.target {
            let here = dist[at].expect("reachability checked at construction");
            let a = self.out_arcs[at]
                .iter()
                .copied()
                .find(|&a| dist[self.arcs[a].1].is_some_and(|d| costs[a] + d == here))
                .expect("the minimizing arc is always tight");
            path.insert(a);
            at = self.arcs[a].1;
        }
        let value = crate::model::solution_cost(&path, costs);
        (path, value)
    }

    fn is_feasible(&self, set: &FeasibleSet) -> bool {
        if set.n() != self.arcs.len() {
            return false;
        }
        let mut at = self.source;
        let mut used = 0;
        while at != self.target {
            let mut next = self.out_arcs[at].iter().filter(|&&a| set.contains(a));
            match (next.next(), next.next()) {
                (Some(&a), None) => {
                    used += 1;
                    at = self.arcs[a].1;
                }
                _ => return false,
            }
        }
        used == set.cardinality()
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError> {
        let mut out = Vec::new();
        self.collect_paths(self.source, &mut Vec::new(), cap, &mut out)?;
        out.sort();
        Ok(out)
    }

    fn size_descriptor(&self) -> usize {
        3 + 2 * self.arcs.len()
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::nominal::test_support::*;

    #[test]
    fn parallel_arcs() {
        let g = DagPath::new(2, vec![(0, 1), (0, 1)], 0, 1).unwrap();
        let (set, v) = g.solve(&CostVector(vec![2.0, 1.0]));
        assert_eq!((set.to_indices(), v), (vec![1], 1.0));
    }

    #[test]
    fn negative_chain_beats_direct_arc() {
        let g = DagPath::new(3, vec![(0, 1), (1, 2), (0, 2)], 0, 2).unwrap();
        let (set, v) = g.solve(&CostVector(vec![-1.0, -1.0, 0.0]));
        assert_eq!((set.to_indices(), v), (vec![0, 1], -2.0));
    }

    #[test]
    fn ties_prefer_smallest_arc_sequence() {
        // arcs 0: s->a, 1: s->b, 2: a->t, 3: b->t, all zero cost
        let g = DagPath::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3).unwrap();
        let (set, _) = g.solve(&CostVector(vec![0.0; 4]));
        assert_eq!(set.to_indices(), vec![0, 2]);
    }

    #[test]
    fn rejects_cycles_and_unreachable_targets() {
        assert_eq!(
            DagPath::new(2, vec![(0, 1), (1, 0)], 0, 1),
            Err(NominalError::NotAcyclic)
        );
        assert_eq!(
            DagPath::new(3, vec![(0, 1)], 0, 2),
            Err(NominalError::Unreachable {
                from: 0,
                target: 2
            })
        );
    }

    #[test]
    fn random_dags_match_path_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..40 {
            let vertices = 6;
            let mut arcs = vec![];
            for u in 0..vertices {
                for v in u + 1..vertices {
                    if rng.gen_bool(0.5) {
                        arcs.push((u, v));
                    }
                }
            }
            arcs.push((0, vertices - 1));
            let g = DagPath::new(vertices, arcs, 0, vertices - 1).unwrap();
            check_against_enumeration(&g, trial, 200);
            if g.n() <= 14 {
                check_feasibility_matches_enumeration(&g);
            }
        }
    }
}
