use super::{DisjointSets, NominalError, NominalOracle};
use crate::model::{CostVector, FeasibleSet};

/// Spanning trees of a connected undirected multigraph; item `e` is edge `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, NominalError> {
        if vertices == 0 {
            return Err(NominalError::NoVertices);
        }
        let mut ds = DisjointSets::new(vertices);
        let mut components = vertices;
        for (edge, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= vertices {
                    return Err(NominalError::VertexOutOfRange {
                        edge,
                        vertex,
                        vertices,
                    });
                }
            }
            if ds.union(u, v) {
                components -= 1;
            }
        }
        if components != 1 {
            return Err(NominalError::Disconnected);
        }
        if edges.is_empty() {
            // a single vertex has only the empty tree, which has no items to choose
            return Err(NominalError::EmptyFamily);
        }
        Ok(SpanningTree { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl NominalOracle for SpanningTree {
    fn n(&self) -> usize {
        self.edges.len()
    }

    /// Kruskal: edges by (cost, index), so equal costs prefer lower indices.
    fn solve(&self, costs: &CostVector) -> (FeasibleSet, f64) {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        let mut ds = DisjointSets::new(self.vertices);
        let mut tree = FeasibleSet::empty(self.edges.len());
        let mut added = 0;
        for e in order {
            let (u, v) = self.edges[e];
            if ds.union(u, v) {
                tree.insert(e);
                added += 1;
                if added + 1 == self.vertices {
                    break;
                }
            }
        }
        let value = crate::model::solution_cost(&tree, costs);
        (tree, value)
    }

    fn is_feasible(&self, set: &FeasibleSet) -> bool {
        if set.n() != self.edges.len() || set.cardinality() + 1 != self.vertices {
            return false;
        }
        let mut ds = DisjointSets::new(self.vertices);
        set.indices().all(|e| ds.union(self.edges[e].0, self.edges[e].1))
    }

    fn enumerate(&self, cap: usize) -> Result<Vec<FeasibleSet>, NominalError> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(self.vertices - 1);
        let ds = DisjointSets::new(self.vertices);
        self.grow(0, &mut chosen, ds, cap, &mut out)?;
        Ok(out)
    }

    fn size_descriptor(&self) -> usize {
        1 + 2 * self.edges.len()
    }
}

impl SpanningTree {
    // Include/exclude edges in index order, pruning cycles and dead ends; this
    // emits trees in lexicographic order of their edge lists.
    fn grow(
        &self,
        next: usize,
        chosen: &mut Vec<usize>,
        ds: DisjointSets,
        cap: usize,
        out: &mut Vec<FeasibleSet>,
    ) -> Result<(), NominalError> {
        let needed = self.vertices - 1 - chosen.len();
        if needed == 0 {
            if out.len() >= cap {
                return Err(NominalError::CapExceeded { cap });
            }
            out.push(FeasibleSet::from_indices(self.edges.len(), chosen));
            return Ok(());
        }
        if self.edges.len() - next < needed {
            return Ok(());
        }
        let (u, v) = self.edges[next];
        let mut with = ds.clone();
        if with.union(u, v) {
            chosen.push(next);
            self.grow(next + 1, chosen, with, cap, out)?;
            chosen.pop();
        }
        self.grow(next + 1, chosen, ds, cap, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::test_support::*;

    fn triangle() -> SpanningTree {
        SpanningTree::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_drops_heaviest_edge() {
        let (set, v) = triangle().solve(&CostVector(vec![1.0, 2.0, 3.0]));
        assert_eq!((set.to_indices(), v), (vec![0, 1], 3.0));
        let (set, v) = triangle().solve(&CostVector(vec![-5.0, -5.0, -5.0]));
        assert_eq!((set.to_indices(), v), (vec![0, 1], -10.0));
    }

    #[test]
    fn triangle_has_three_trees() {
        let trees = triangle().enumerate(100).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees.iter().all(|t| t.cardinality() == 2));
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(
            SpanningTree::new(3, vec![(0, 1)]),
            Err(NominalError::Disconnected)
        );
        assert!(matches!(
            SpanningTree::new(2, vec![(0, 2)]),
            Err(NominalError::VertexOutOfRange { .. })
        ));
        assert_eq!(SpanningTree::new(0, vec![]), Err(NominalError::NoVertices));
    }

    #[test]
    fn four_vertex_five_edge_graph_matches_enumeration() {
        // a 4-cycle with one chord: 8 spanning trees
        let g = SpanningTree::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(g.enumerate(100).unwrap().len(), 8);
        check_against_enumeration(&g, 5, 1000);
        check_feasibility_matches_enumeration(&g);
    }

    #[test]
    fn complete_graph_tree_count_and_brute_force() {
        let mut edges = vec![];
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let k5 = SpanningTree::new(5, edges).unwrap();
        // Cayley: 5^3
        assert_eq!(k5.enumerate(1000).unwrap().len(), 125);
        assert!(k5.enumerate(100).is_err());
        check_against_enumeration(&k5, 9, 500);
        check_feasibility_matches_enumeration(&k5);
    }

    #[test]
    fn parallel_edges_are_distinct_items() {
        let g = SpanningTree::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.enumerate(10).unwrap().len(), 2);
        let (set, _) = g.solve(&CostVector(vec![4.0, 4.0]));
        assert_eq!(set.to_indices(), vec![0]);
    }
}
