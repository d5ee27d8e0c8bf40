//! Canonical labeling and isomorphism-reduced enumeration for small graphs.
//!
//! Canonical form of a graph on `n <= 10ish` vertices: the colex edge bitmask
//! minimized over vertex orderings, searched with degree-refinement pruning.
//! Enumeration extends each (n-1)-vertex class by every possible neighborhood
//! of a new vertex and dedupes by canonical form.

use crate::graph::Graph;
use crate::pair_index;
use std::collections::HashSet;

/// Edge bitmask of `g`'s live vertices under their ascending order.
pub fn edge_mask(g: &Graph) -> u64 {
    let labels = g.live_labels();
    g.induced_edge_mask(&labels)
}

#[cfg(test)]
fn permuted_mask(n: usize, mask: u64, perm: &[usize]) -> u64 {
    // perm[old] = new position.
    let mut out = 0u64;
    for j in 0..n {
        for i in 0..j {
            if mask >> pair_index(i, j) & 1 == 1 {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                out |= 1 << pair_index(a, b);
            }
        }
    }
    out
}

/// Canonical form: the colex edge mask minimized over all vertex orderings.
///
/// Positions are filled from the top (position `n-1` downward), since in
/// colex order the pairs among the highest positions carry the most
/// significant bits. Placing a vertex only ever adds bits, so any partial
/// assignment whose determined bits already reach the best is pruned; trying
/// candidates in ascending order of the bits they would add makes a strong
/// incumbent appear early.
pub fn canonical_mask(n: usize, mask: u64) -> u64 {
    assert!(n <= 12, "canonical search is meant for small graphs");
    if n < 2 {
        return 0;
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| {
            let mut row = 0u64;
            for u in 0..n {
                if u != v {
                    let (a, b) = (u.min(v), u.max(v));
                    if mask >> pair_index(a, b) & 1 == 1 {
                        row |= 1 << u;
                    }
                }
            }
            row
        })
        .collect();

    struct Search<'a> {
        n: usize,
        adj: &'a [u64],
        best: u64,
        // placed[i] = old vertex now at position n-1-i.
        placed: Vec<usize>,
        used: u64,
    }

    impl Search<'_> {
        fn added_bits(&self, v: usize) -> u64 {
            let pos = self.n - 1 - self.placed.len();
            let mut add = 0u64;
            for (i, &w) in self.placed.iter().enumerate() {
                if self.adj[v] >> w & 1 == 1 {
                    add |= 1 << pair_index(pos, self.n - 1 - i);
                }
            }
            add
        }

        fn go(&mut self, cur: u64) {
            if cur >= self.best {
                return;
            }
            if self.placed.len() == self.n {
                self.best = cur;
                return;
            }
            let mut cands: Vec<(u64, usize)> = (0..self.n)
                .filter(|&v| self.used >> v & 1 == 0)
                .map(|v| (self.added_bits(v), v))
                .collect();
            cands.sort_unstable();
            for (add, v) in cands {
                self.placed.push(v);
                self.used |= 1 << v;
                self.go(cur | add);
                self.used &= !(1 << v);
                self.placed.pop();
            }
        }
    }

    let mut search = Search { n, adj: &adj, best: u64::MAX, placed: Vec::new(), used: 0 };
    search.go(0);
    search.best
}

/// Canonical form of a graph (live vertices compacted in ascending order).
pub fn canonical_form(g: &Graph) -> u64 {
    canonical_mask(g.live_count(), edge_mask(g))
}

/// All isomorphism classes of `n`-vertex graphs, as canonical edge masks in
/// ascending order. Classes for `n-1` are extended by every neighborhood of a
/// new last vertex, then deduped canonically.
pub fn graph_classes(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0];
    }
    let mut classes: Vec<u64> = vec![0]; // the 1-vertex graph
    for m in 2..=n {
        let mut next: HashSet<u64> = HashSet::new();
        let base_bits = pair_index(0, m - 1);
        for &c in &classes {
            for nb in 0u64..1 << (m - 1) {
                let mask = c | (nb << base_bits);
                next.insert(canonical_mask(m, mask));
            }
        }
        classes = next.into_iter().collect();
        classes.sort_unstable();
    }
    classes
}

/// Are two small graphs isomorphic (by canonical form)?
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.live_count() == b.live_count() && canonical_form(a) == canonical_form(b)
}
