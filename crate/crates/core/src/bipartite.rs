//! Ordered bipartite graphs `(L, R, E)`.
//!
//! The part assignment is data, not convention: pivoting at an edge `uv`
//! swaps `u` and `v` between the parts, so two graphs with the same edge set
//! but different part assignments are different values. This is the ordered
//! sense in which pivot-minors correspond to labeled binary-matroid minors.

use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::graph::Graph;
use crate::rng::CounterRng;
use crate::{bipartite_cell_index, Label};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedBipartiteGraph {
    graph: Graph,
    left: Vec<Label>,
    right: Vec<Label>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteJson {
    #[serde(rename = "L")]
    left: Vec<Label>,
    #[serde(rename = "R")]
    right: Vec<Label>,
    edges: Vec<(Label, Label)>,
}

impl OrderedBipartiteGraph {
    /// Builds from explicit parts and edges. Parts must be disjoint and every
    /// edge must go between them.
    pub fn new(left: &[Label], right: &[Label], edges: &[(Label, Label)]) -> Result<Self> {
        let mut l: Vec<Label> = left.to_vec();
        let mut r: Vec<Label> = right.to_vec();
        l.sort_unstable();
        l.dedup();
        r.sort_unstable();
        r.dedup();
        if l.iter().any(|v| r.binary_search(v).is_ok()) {
            return Err(Error::Precondition("parts must be disjoint".into()));
        }
        let capacity = l.iter().chain(&r).copied().max().map_or(0, |m| m + 1);
        let mut graph = Graph::edgeless(capacity);
        for v in graph.live_labels() {
            if l.binary_search(&v).is_err() && r.binary_search(&v).is_err() {
                graph = graph.delete_vertex(v)?;
            }
        }
        let mut out = OrderedBipartiteGraph { graph, left: l, right: r };
        for &(u, v) in edges {
            let (lv, rv) = out.orient(u, v)?;
            out.graph.add_edge(lv, rv);
        }
        Ok(out)
    }

    /// Uniform ordered bipartite graph on parts `{0..l}` and `{l..l+r}`: each
    /// of the `l*r` cells is an edge independently with probability 1/2, one
    /// stream bit per cell, right-major cell order.
    pub fn sample_uniform(l: usize, r: usize, seed: u64) -> Self {
        let left: Vec<Label> = (0..l).collect();
        let right: Vec<Label> = (l..l + r).collect();
        let mut g = OrderedBipartiteGraph::new(&left, &right, &[]).unwrap();
        let mut rng = CounterRng::new(seed);
        for &rv in &right {
            for &lv in &left {
                if rng.next_bit() {
                    g.graph.add_edge(lv, rv);
                }
            }
        }
        g
    }

    fn orient(&self, u: Label, v: Label) -> Result<(Label, Label)> {
        match (self.is_left(u), self.is_right(u), self.is_left(v), self.is_right(v)) {
            (true, _, _, true) => Ok((u, v)),
            (_, true, true, _) => Ok((v, u)),
            _ => Err(Error::Precondition(format!("edge {u}-{v} does not cross the parts"))),
        }
    }

    pub fn is_left(&self, v: Label) -> bool {
        self.left.binary_search(&v).is_ok()
    }

    pub fn is_right(&self, v: Label) -> bool {
        self.right.binary_search(&v).is_ok()
    }

    pub fn left_labels(&self) -> &[Label] {
        &self.left
    }

    pub fn right_labels(&self) -> &[Label] {
        &self.right
    }

    pub fn live_labels(&self) -> Vec<Label> {
        self.graph.live_labels()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn has_edge(&self, u: Label, v: Label) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn edges(&self) -> Vec<(Label, Label)> {
        self.graph.edges()
    }

    pub fn delete_vertex(&self, v: Label) -> Result<Self> {
        let graph = self.graph.delete_vertex(v)?;
        let mut out = self.clone();
        out.graph = graph;
        out.left.retain(|&x| x != v);
        out.right.retain(|&x| x != v);
        Ok(out)
    }

    /// Ordered pivot: edge set of the unordered pivot, parts
    /// `L sym {u,v}`, `R sym {u,v}` (the endpoints swap sides).
    pub fn pivot(&self, u: Label, v: Label) -> Result<Self> {
        let (lv, rv) = self.orient(u, v)?;
        if !self.graph.has_edge(lv, rv) {
            return Err(Error::NoEdge(u, v));
        }
        let graph = self.graph.pivot(lv, rv)?;
        let mut out = self.clone();
        out.graph = graph;
        out.left.retain(|&x| x != lv);
        out.right.retain(|&x| x != rv);
        out.left.push(rv);
        out.right.push(lv);
        out.left.sort_unstable();
        out.right.sort_unstable();
        debug_assert!(out.edges_respect_parts());
        Ok(out)
    }

    /// Pivot if `uv` is an edge, identity otherwise. Both endpoints must be
    /// live and in opposite parts.
    pub fn attempted_pivot(&self, u: Label, v: Label) -> Result<Self> {
        let (lv, rv) = self.orient(u, v)?;
        if self.graph.has_edge(lv, rv) {
            self.pivot(lv, rv)
        } else {
            Ok(self.clone())
        }
    }

    /// Toggles the biclique between `S <= L` and `T <= R`.
    pub fn toggle_biclique(&self, s: &[Label], t: &[Label]) -> Result<Self> {
        if s.iter().any(|v| !self.is_left(*v)) || t.iter().any(|v| !self.is_right(*v)) {
            return Err(Error::Precondition("biclique sides must lie in L and R".into()));
        }
        let mut out = self.clone();
        out.graph = self.graph.toggle_biclique(s, t)?;
        Ok(out)
    }

    /// Induced subgraph on exactly `u`, parts inherited.
    pub fn induced_subgraph(&self, u: &[Label]) -> Result<Self> {
        let graph = self.graph.induced_subgraph(u)?;
        let mut out = self.clone();
        out.graph = graph;
        out.left.retain(|x| u.contains(x));
        out.right.retain(|x| u.contains(x));
        Ok(out)
    }

    /// Bipartite adjacency matrix indexed `R x L`: row `i` is the `i`-th
    /// smallest right label, column `j` the `j`-th smallest left label.
    pub fn adjacency_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.right.len(), self.left.len(), |i, j| {
            self.graph.has_edge(self.right[i], self.left[j])
        })
    }

    /// Cell bitmask of the subgraph induced on `u_left` and `u_right` (both
    /// sorted): bit `bipartite_cell_index(a, b, u_left.len())` is the edge
    /// between the `a`-th of `u_left` and the `b`-th of `u_right`.
    pub fn induced_cell_mask(&self, u_left: &[Label], u_right: &[Label]) -> u64 {
        let mut mask = 0u64;
        for (b, &rv) in u_right.iter().enumerate() {
            for (a, &lv) in u_left.iter().enumerate() {
                if self.graph.has_edge(lv, rv) {
                    mask |= 1 << bipartite_cell_index(a, b, u_left.len());
                }
            }
        }
        mask
    }

    fn edges_respect_parts(&self) -> bool {
        self.edges().iter().all(|&(u, v)| {
            (self.is_left(u) && self.is_right(v)) || (self.is_right(u) && self.is_left(v))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BipartiteJson {
            left: self.left.clone(),
            right: self.right.clone(),
            edges: self.edges(),
        })
        .expect("bipartite graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: BipartiteJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        OrderedBipartiteGraph::new(&parsed.left, &parsed.right, &parsed.edges)
    }
}

/// Bipartite `G_J`: attempted pivots at `pairs[i]` for `i` in `J` in
/// increasing index order.
pub fn build_gj_bipartite(
    g: &OrderedBipartiteGraph,
    pairs: &[(Label, Label)],
    j: &[usize],
) -> Result<OrderedBipartiteGraph> {
    let mut idx: Vec<usize> = j.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.iter().any(|&i| i >= pairs.len()) {
        return Err(Error::Range("J contains an index outside the pair list".into()));
    }
    let mut cur = g.clone();
    for &i in &idx {
        cur = cur.attempted_pivot(pairs[i].0, pairs[i].1)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_bad_input() {
        assert!(OrderedBipartiteGraph::new(&[0, 1], &[1, 2], &[]).is_err());
        assert!(OrderedBipartiteGraph::new(&[0], &[1], &[(0, 0)]).is_err());
    }

    #[test]
    fn pivot_swaps_parts_and_preserves_bipartiteness() {
        let g = OrderedBipartiteGraph::new(&[0], &[1], &[(0, 1)]).unwrap();
        let h = g.pivot(0, 1).unwrap();
        assert_eq!(h.left_labels(), &[1]);
        assert_eq!(h.right_labels(), &[0]);
        assert!(h.has_edge(0, 1));
        for trial in 0..500 {
            let g = OrderedBipartiteGraph::sample_uniform(3, 4, trial);
            for (u, v) in g.edges() {
                let h = g.pivot(u, v).unwrap();
                assert!(h.edges_respect_parts());
                assert_eq!(h.pivot(u, v).unwrap(), g);
            }
        }
    }

    #[test]
    fn attempted_pivot_is_involution() {
        for trial in 0..500 {
            let g = OrderedBipartiteGraph::sample_uniform(3, 3, 9000 + trial);
            for &lv in g.left_labels() {
                for &rv in g.right_labels() {
                    let h = g.attempted_pivot(lv, rv).unwrap();
                    assert_eq!(h.attempted_pivot(lv, rv).unwrap(), g);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(
            OrderedBipartiteGraph::sample_uniform(3, 4, 1),
            OrderedBipartiteGraph::sample_uniform(3, 4, 1)
        );
    }

    #[test]
    fn json_round_trip() {
        let g = OrderedBipartiteGraph::sample_uniform(2, 3, 7);
        let back = OrderedBipartiteGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn gj_endpoints() {
        let g = OrderedBipartiteGraph::sample_uniform(4, 4, 3);
        let pairs: Vec<(Label, Label)> = (0..3).map(|i| (i, 4 + i)).collect();
        assert_eq!(build_gj_bipartite(&g, &pairs, &[]).unwrap(), g);
        let all = build_gj_bipartite(&g, &pairs, &[0, 1, 2]).unwrap();
        let mut expect = g.clone();
        for &(a, b) in &pairs {
            expect = expect.attempted_pivot(a, b).unwrap();
        }
        assert_eq!(all, expect);
    }
}
