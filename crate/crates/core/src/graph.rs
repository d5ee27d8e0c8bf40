//! Labeled simple graphs with stable labels and bit-packed adjacency, and the
//! elementary operations on them: local complementation, pivot, attempted
//! pivot, template toggles, induced subgraphs, the `G_J` composites, and
//! seeded uniform sampling.
//!
//! Deletion masks a label out of `present` instead of renumbering, so labels
//! in minor witnesses stay meaningful against the original graph. Graphs are
//! values: every operation returns a new graph.

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::{pair_index, Label};
use serde::{Deserialize, Serialize};

const WORD_BITS: usize = 64;

#[inline]
fn word_of(v: usize) -> usize {
    v / WORD_BITS
}

#[inline]
fn bit_of(v: usize) -> u64 {
    1u64 << (v % WORD_BITS)
}

fn mask_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                None
            } else {
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * WORD_BITS + t)
            }
        })
    })
}

/// A labeled simple graph. Labels live in `0..capacity`; `present` marks the
/// live ones. Adjacency rows are packed `u64` words and kept clean: dead rows
/// and dead columns are zero.
#[derive(Debug, Clone)]
pub struct Graph {
    capacity: usize,
    words: usize,
    present: Vec<u64>,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph with all labels `0..n` live.
    pub fn edgeless(n: usize) -> Self {
        let words = n.div_ceil(WORD_BITS).max(1);
        let mut present = vec![0u64; words];
        for v in 0..n {
            present[word_of(v)] |= bit_of(v);
        }
        Graph { capacity: n, words, present, adj: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: &[(Label, Label)]) -> Self {
        let mut g = Graph::edgeless(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Graph on `[k]` with the given colex edge bitmask.
    pub fn from_edge_mask(k: usize, mask: u64) -> Self {
        let mut g = Graph::edgeless(k);
        for j in 0..k {
            for i in 0..j {
                if (mask >> pair_index(i, j)) & 1 == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Uniform `G(n, 1/2)`: each potential edge present independently with
    /// probability 1/2, one stream bit per colex pair.
    pub fn sample_uniform(n: usize, seed: u64) -> Self {
        let mut rng = CounterRng::new(seed);
        let mut g = Graph::edgeless(n);
        for j in 0..n {
            for i in 0..j {
                if rng.next_bit() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn is_live(&self, v: Label) -> bool {
        v < self.capacity && self.present[word_of(v)] & bit_of(v) != 0
    }

    pub fn live_count(&self) -> usize {
        self.present.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn live_labels(&self) -> Vec<Label> {
        mask_ones(&self.present).collect()
    }

    #[inline]
    pub fn has_edge(&self, u: Label, v: Label) -> bool {
        debug_assert!(self.is_live(u) && self.is_live(v));
        self.adj[u * self.words + word_of(v)] & bit_of(v) != 0
    }

    pub fn add_edge(&mut self, u: Label, v: Label) {
        assert!(u != v, "self-loop at {u}");
        assert!(self.is_live(u) && self.is_live(v), "edge on dead label");
        self.adj[u * self.words + word_of(v)] |= bit_of(v);
        self.adj[v * self.words + word_of(u)] |= bit_of(u);
    }

    pub fn toggle_edge(&mut self, u: Label, v: Label) {
        assert!(u != v && self.is_live(u) && self.is_live(v));
        self.adj[u * self.words + word_of(v)] ^= bit_of(v);
        self.adj[v * self.words + word_of(u)] ^= bit_of(u);
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for v in self.live_labels() {
            for u in self.neighbors(v) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    #[inline]
    fn row(&self, v: Label) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: Label) -> Vec<Label> {
        mask_ones(self.row(v)).collect()
    }

    pub fn degree(&self, v: Label) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbor_mask(&self, v: Label) -> Vec<u64> {
        self.row(v).to_vec()
    }

    fn require_live(&self, v: Label) -> Result<()> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(Error::Vertex(v))
        }
    }

    /// Deletes `v`. Other labels keep their names.
    pub fn delete_vertex(&self, v: Label) -> Result<Graph> {
        self.require_live(v)?;
        let mut g = self.clone();
        g.present[word_of(v)] &= !bit_of(v);
        for u in self.neighbors(v) {
            g.adj[u * g.words + word_of(v)] &= !bit_of(v);
        }
        for w in 0..g.words {
            g.adj[v * g.words + w] = 0;
        }
        Ok(g)
    }

    /// Local complementation `G * v`: complements the subgraph induced on the
    /// neighborhood of `v`; everything else, including all labels, unchanged.
    pub fn local_complement(&self, v: Label) -> Result<Graph> {
        self.require_live(v)?;
        let mut g = self.clone();
        let nv = self.neighbor_mask(v);
        for i in mask_ones(&nv) {
            let base = i * g.words;
            for w in 0..g.words {
                g.adj[base + w] ^= nv[w];
            }
            // i is in N(v), so the XOR above flipped the diagonal bit; undo.
            g.adj[base + word_of(i)] ^= bit_of(i);
        }
        Ok(g)
    }

    /// Pivot `G x uv = G * u * v * u`, defined when `uv` is an edge.
    pub fn pivot(&self, u: Label, v: Label) -> Result<Graph> {
        self.require_live(u)?;
        self.require_live(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NoEdge(u, v));
        }
        self.local_complement(u)?.local_complement(v)?.local_complement(u)
    }

    /// Pivot computed by its algebraic description: symmetric difference with
    /// the complete tripartite graph on `N(u) cap N(v)`,
    /// `N(u) minus (N(v) + v)`, `N(v) minus (N(u) + u)`, then swapping the
    /// labels `u` and `v`. Kept as an independent route for cross-checking
    /// [`Graph::pivot`].
    pub fn pivot_via_template(&self, u: Label, v: Label) -> Result<Graph> {
        self.require_live(u)?;
        self.require_live(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NoEdge(u, v));
        }
        let nu = self.neighbor_mask(u);
        let nv = self.neighbor_mask(v);
        let mut both = vec![0u64; self.words];
        let mut only_u = vec![0u64; self.words];
        let mut only_v = vec![0u64; self.words];
        for w in 0..self.words {
            both[w] = nu[w] & nv[w];
            only_u[w] = nu[w] & !nv[w];
            only_v[w] = nv[w] & !nu[w];
        }
        only_u[word_of(v)] &= !bit_of(v);
        only_v[word_of(u)] &= !bit_of(u);
        let mut g = self.clone();
        g.toggle_cross(&both, &only_u);
        g.toggle_cross(&both, &only_v);
        g.toggle_cross(&only_u, &only_v);
        g.swap_labels(u, v);
        Ok(g)
    }

    /// Attempted pivot: `G x uv` if `uv` is an edge, `G` unchanged otherwise.
    pub fn attempted_pivot(&self, u: Label, v: Label) -> Result<Graph> {
        self.require_live(u)?;
        self.require_live(v)?;
        if self.has_edge(u, v) {
            self.pivot(u, v)
        } else {
            Ok(self.clone())
        }
    }

    /// Toggles all edges of the clique on `S`.
    pub fn toggle_clique(&self, s: &[Label]) -> Result<Graph> {
        let sm = self.label_mask(s)?;
        let mut g = self.clone();
        for i in mask_ones(&sm) {
            let base = i * g.words;
            for w in 0..g.words {
                g.adj[base + w] ^= sm[w];
            }
            g.adj[base + word_of(i)] ^= bit_of(i);
        }
        Ok(g)
    }

    /// Toggles the complete tripartite template with tripartition
    /// `{S minus T, T minus S, S cap T}`. When `S = T` the tripartition has a
    /// single nonempty part, so the template is empty.
    pub fn toggle_tripartite(&self, s: &[Label], t: &[Label]) -> Result<Graph> {
        let sm = self.label_mask(s)?;
        let tm = self.label_mask(t)?;
        let mut p1 = vec![0u64; self.words];
        let mut p2 = vec![0u64; self.words];
        let mut p3 = vec![0u64; self.words];
        for w in 0..self.words {
            p1[w] = sm[w] & !tm[w];
            p2[w] = tm[w] & !sm[w];
            p3[w] = sm[w] & tm[w];
        }
        let mut g = self.clone();
        g.toggle_cross(&p1, &p2);
        g.toggle_cross(&p1, &p3);
        g.toggle_cross(&p2, &p3);
        Ok(g)
    }

    /// Toggles the biclique between disjoint sets `S` and `T`.
    pub fn toggle_biclique(&self, s: &[Label], t: &[Label]) -> Result<Graph> {
        let sm = self.label_mask(s)?;
        let tm = self.label_mask(t)?;
        if sm.iter().zip(&tm).any(|(a, b)| a & b != 0) {
            return Err(Error::Precondition("biclique parts must be disjoint".into()));
        }
        let mut g = self.clone();
        g.toggle_cross(&sm, &tm);
        Ok(g)
    }

    /// Induced subgraph on exactly the labels `U`.
    pub fn induced_subgraph(&self, u: &[Label]) -> Result<Graph> {
        let um = self.label_mask(u)?;
        let mut g = self.clone();
        for v in self.live_labels() {
            if um[word_of(v)] & bit_of(v) == 0 {
                g = g.delete_vertex(v)?;
            }
        }
        Ok(g)
    }

    /// Colex edge bitmask of the subgraph induced on `u`, which must be
    /// sorted ascending; bit `pair_index(a, b)` refers to positions in `u`.
    pub fn induced_edge_mask(&self, u: &[Label]) -> u64 {
        debug_assert!(u.windows(2).all(|w| w[0] < w[1]));
        let mut mask = 0u64;
        for b in 0..u.len() {
            for a in 0..b {
                if self.has_edge(u[a], u[b]) {
                    mask |= 1 << pair_index(a, b);
                }
            }
        }
        mask
    }

    /// Symmetric difference of edge sets; vertex sets must agree.
    pub fn symmetric_difference(&self, other: &Graph) -> Result<Graph> {
        if self.live_labels() != other.live_labels() {
            return Err(Error::Labels("symmetric difference needs equal vertex sets".into()));
        }
        let mut g = self.clone();
        for v in other.live_labels() {
            for u in other.neighbors(v) {
                if u < v {
                    g.toggle_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    fn label_mask(&self, labels: &[Label]) -> Result<Vec<u64>> {
        let mut m = vec![0u64; self.words];
        for &v in labels {
            self.require_live(v)?;
            m[word_of(v)] |= bit_of(v);
        }
        Ok(m)
    }

    /// Toggles all edges between the disjoint masks `a` and `b`.
    fn toggle_cross(&mut self, a: &[u64], b: &[u64]) {
        debug_assert!(a.iter().zip(b).all(|(x, y)| x & y == 0));
        for i in mask_ones(a) {
            let base = i * self.words;
            for w in 0..self.words {
                self.adj[base + w] ^= b[w];
            }
        }
        for j in mask_ones(b) {
            let base = j * self.words;
            for w in 0..self.words {
                self.adj[base + w] ^= a[w];
            }
        }
    }

    fn swap_labels(&mut self, u: Label, v: Label) {
        for i in self.live_labels() {
            let base = i * self.words;
            let bu = self.adj[base + word_of(u)] & bit_of(u) != 0;
            let bv = self.adj[base + word_of(v)] & bit_of(v) != 0;
            if bu != bv {
                self.adj[base + word_of(u)] ^= bit_of(u);
                self.adj[base + word_of(v)] ^= bit_of(v);
            }
        }
        for w in 0..self.words {
            self.adj.swap(u * self.words + w, v * self.words + w);
        }
        // Rows were swapped after columns, so the uv entry is already right.
    }

    /// Stable content key: live mask and adjacency rows of live labels.
    /// Capacity-independent, suitable for hashing search states.
    pub fn content_key(&self) -> (Vec<u64>, Vec<u64>) {
        let mut present = self.present.clone();
        while present.last() == Some(&0) {
            present.pop();
        }
        let mut rows = Vec::new();
        for v in self.live_labels() {
            rows.extend_from_slice(self.row(v));
            while rows.last() == Some(&0) {
                rows.pop();
            }
            rows.push(u64::MAX); // row terminator keeps the flattening injective
        }
        (present, rows)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.content_key() == other.content_key()
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.content_key().hash(state);
    }
}

/// One step of an operation sequence: a local complementation or a pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub enum Step {
    Comp(Label),
    Pivot(Label, Label),
}

impl Step {
    pub fn labels(&self) -> Vec<Label> {
        match *self {
            Step::Comp(v) => vec![v],
            Step::Pivot(u, v) => vec![u, v],
        }
    }

    pub fn contains(&self, v: Label) -> bool {
        match *self {
            Step::Comp(x) => x == v,
            Step::Pivot(a, b) => a == v || b == v,
        }
    }
}

impl From<Step> for Vec<usize> {
    fn from(s: Step) -> Self {
        s.labels()
    }
}

impl TryFrom<Vec<usize>> for Step {
    type Error = String;
    fn try_from(v: Vec<usize>) -> std::result::Result<Self, String> {
        match v.as_slice() {
            [x] => Ok(Step::Comp(*x)),
            [a, b] if a != b => Ok(Step::Pivot(*a, *b)),
            _ => Err(format!("a step is one label or two distinct labels, got {v:?}")),
        }
    }
}

/// Ordered list of singleton/pair steps.
pub type OpSequence = Vec<Step>;

/// Applies one step. Pivot steps require their edge to exist.
pub fn apply_step(g: &Graph, step: Step) -> Result<Graph> {
    match step {
        Step::Comp(v) => g.local_complement(v),
        Step::Pivot(u, v) => g.pivot(u, v),
    }
}

pub fn apply_steps(g: &Graph, steps: &[Step]) -> Result<Graph> {
    let mut cur = g.clone();
    for &s in steps {
        cur = apply_step(&cur, s)?;
    }
    Ok(cur)
}

/// Applies local complementations at `seq` in order.
pub fn apply_comps(g: &Graph, seq: &[Label]) -> Result<Graph> {
    let mut cur = g.clone();
    for &v in seq {
        cur = cur.local_complement(v)?;
    }
    Ok(cur)
}

/// `G_J`: complements at `base[i]` for `i` in `J` in increasing index order.
/// No vertex is deleted; deletion happens only at minor readout.
pub fn build_gj(g: &Graph, base: &[Label], j: &[usize]) -> Result<Graph> {
    let mut idx: Vec<usize> = j.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.iter().any(|&i| i >= base.len()) {
        return Err(Error::Range("J contains an index outside the base list".into()));
    }
    let seq: Vec<Label> = idx.iter().map(|&i| base[i]).collect();
    apply_comps(g, &seq)
}
