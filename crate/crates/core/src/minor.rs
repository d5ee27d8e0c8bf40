//! Exact vertex-minor and pivot-minor decision.
//!
//! The vertex-minor recursion eliminates one vertex `v` outside the target at
//! a time, branching on `G - v`, `G * v - v`, and `G x vu - v` for a single
//! neighbor `u` (the choice of `u` is irrelevant up to pivot equivalence).
//! Pivot-minors on ordered bipartite graphs use the same scheme without the
//! complementation branch. Both recursions are memoized on the raw content of
//! the remaining graph; labels matter throughout, no isomorphism reduction.

use crate::bipartite::OrderedBipartiteGraph;
use crate::error::{Error, Result};
use crate::graph::{Graph, OpSequence, Step};
use crate::Label;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};

/// Default cap on expanded recursion nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A replayable certificate: apply `ops` in order, then delete `deletions`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub ops: OpSequence,
    pub deletions: Vec<Label>,
}

impl MinorWitness {
    pub fn trivial() -> Self {
        MinorWitness { ops: Vec::new(), deletions: Vec::new() }
    }

    /// Replays the witness on a plain graph.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut cur = crate::graph::apply_steps(g, &self.ops)?;
        for &v in &self.deletions {
            cur = cur.delete_vertex(v)?;
        }
        Ok(cur)
    }

    /// Replays the witness on an ordered bipartite graph; every op must be a
    /// pivot.
    pub fn replay_bipartite(&self, g: &OrderedBipartiteGraph) -> Result<OrderedBipartiteGraph> {
        let mut cur = g.clone();
        for op in &self.ops {
            match *op {
                Step::Pivot(u, v) => cur = cur.pivot(u, v)?,
                Step::Comp(v) => {
                    return Err(Error::Precondition(format!(
                        "complementation at {v} in a pivot-minor witness"
                    )))
                }
            }
        }
        for &v in &self.deletions {
            cur = cur.delete_vertex(v)?;
        }
        Ok(cur)
    }
}

type GraphKey = (Vec<u64>, Vec<u64>);

struct VmSearch {
    target: Graph,
    target_labels: Vec<Label>,
    memo: HashMap<GraphKey, bool>,
    expanded: u64,
    budget: u64,
}

impl VmSearch {
    fn is_target_label(&self, v: Label) -> bool {
        self.target_labels.binary_search(&v).is_ok()
    }

    fn choose_victim(&self, state: &Graph) -> Option<Label> {
        state.live_labels().into_iter().rev().find(|&v| !self.is_target_label(v))
    }

    /// The three reduced graphs of the elimination step at `v`, paired with
    /// the op that produced each.
    fn branches(state: &Graph, v: Label) -> Vec<(Option<Step>, Graph)> {
        let mut out = Vec::with_capacity(3);
        out.push((None, state.delete_vertex(v).expect("v is live")));
        out.push((
            Some(Step::Comp(v)),
            state.local_complement(v).expect("v is live").delete_vertex(v).expect("v is live"),
        ));
        if let Some(u) = state.neighbors(v).first().copied() {
            out.push((
                Some(Step::Pivot(v, u)),
                state.pivot(v, u).expect("edge exists").delete_vertex(v).expect("v is live"),
            ));
        }
        out
    }

    /// Base case: no vertex left to eliminate, so the target is a minor iff
    /// it is locally equivalent to the state. Returns a complementation
    /// sequence reaching it.
    fn base_sequence(&mut self, state: &Graph) -> Result<Option<Vec<Label>>> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::Budget(format!("vertex-minor search exceeded {} nodes", self.budget)));
        }
        if state == &self.target {
            return Ok(Some(Vec::new()));
        }
        let labels = state.live_labels();
        let mut parents: HashMap<Graph, (Graph, Label)> = HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(state.clone());
        let mut seen = HashSet::new();
        seen.insert(state.clone());
        while let Some(cur) = queue.pop_front() {
            for &v in &labels {
                let next = cur.local_complement(v).expect("live");
                if seen.insert(next.clone()) {
                    parents.insert(next.clone(), (cur.clone(), v));
                    if next == self.target {
                        let mut seq = Vec::new();
                        let mut walk = next;
                        while let Some((prev, at)) = parents.get(&walk) {
                            seq.push(*at);
                            walk = prev.clone();
                        }
                        seq.reverse();
                        return Ok(Some(seq));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    fn decide(&mut self, state: &Graph) -> Result<bool> {
        let key = state.content_key();
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let Some(v) = self.choose_victim(state) else {
            let hit = self.base_sequence(state)?.is_some();
            self.memo.insert(key, hit);
            return Ok(hit);
        };
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::Budget(format!("vertex-minor search exceeded {} nodes", self.budget)));
        }
        let mut found = false;
        for (_, child) in Self::branches(state, v) {
            if self.decide(&child)? {
                found = true;
                break;
            }
        }
        self.memo.insert(key, found);
        Ok(found)
    }

    /// Rebuilds the witness along decided-true branches; `decide` must have
    /// returned true for `state`.
    fn extract(&mut self, state: &Graph, witness: &mut MinorWitness) -> Result<()> {
        let Some(v) = self.choose_victim(state) else {
            let seq = self.base_sequence(state)?.expect("base was decided true");
            witness.ops.extend(seq.into_iter().map(Step::Comp));
            return Ok(());
        };
        for (op, child) in Self::branches(state, v) {
            if self.decide(&child)? {
                if let Some(op) = op {
                    witness.ops.push(op);
                }
                witness.deletions.push(v);
                return self.extract(&child, witness);
            }
        }
        unreachable!("state was decided true but no branch is")
    }
}

/// Decides whether `h` is a vertex-minor of `g` on exactly its labels,
/// returning a replayable witness on success.
pub fn is_vertex_minor(g: &Graph, h: &Graph, budget: u64) -> Result<Option<MinorWitness>> {
    let g_labels = g.live_labels();
    let target_labels = h.live_labels();
    if !target_labels.iter().all(|v| g_labels.binary_search(v).is_ok()) {
        return Err(Error::Labels("target labels must be live in the host".into()));
    }
    let mut search = VmSearch {
        target: h.clone(),
        target_labels,
        memo: HashMap::new(),
        expanded: 0,
        budget,
    };
    if !search.decide(g)? {
        return Ok(None);
    }
    let mut witness = MinorWitness::trivial();
    search.extract(g, &mut witness)?;
    debug_assert_eq!(&witness.replay(g)?, h);
    Ok(Some(witness))
}

/// Bitset over all `2^C(|U|,2)` edge masks on a target label set.
pub struct ReachableTargets {
    pub words: Vec<u64>,
    pub cells: usize,
}

impl ReachableTargets {
    fn empty(cells: usize) -> Self {
        let bits = 1usize << cells;
        ReachableTargets { words: vec![0; bits.div_ceil(64)], cells }
    }

    fn insert(&mut self, mask: u64) {
        self.words[(mask / 64) as usize] |= 1 << (mask % 64);
    }

    fn union_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.words[(mask / 64) as usize] >> (mask % 64) & 1 == 1
    }

    pub fn is_full(&self) -> bool {
        let bits = 1usize << self.cells;
        self.words.iter().enumerate().all(|(i, &w)| {
            let lo = i * 64;
            let want = bits.saturating_sub(lo).min(64);
            match want {
                0 => true,
                64 => w == u64::MAX,
                _ => w == (1u64 << want) - 1,
            }
        })
    }

    /// Smallest absent mask, if any.
    pub fn first_missing(&self) -> Option<u64> {
        (0..1u64 << self.cells).find(|&m| !self.contains(m))
    }
}

struct SweepCtx {
    u: Vec<Label>,
    cells: usize,
    memo: HashMap<GraphKey, Vec<u64>>,
    expanded: u64,
    budget: u64,
}

impl SweepCtx {
    fn sweep(&mut self, state: &Graph) -> Result<Vec<u64>> {
        let victim =
            state.live_labels().into_iter().rev().find(|v| self.u.binary_search(v).is_err());
        let key = state.content_key();
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let Some(v) = victim else {
            // Live set equals U: every locally equivalent graph is reachable.
            let mut set = ReachableTargets::empty(self.cells);
            let cap = 3usize.pow(self.u.len() as u32) + 1;
            for m in local_equivalence_orbit(state, cap)? {
                set.insert(m.induced_edge_mask(&self.u));
            }
            self.memo.insert(key, set.words.clone());
            return Ok(set.words);
        };
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::Budget(format!("universality sweep exceeded {} nodes", self.budget)));
        }
        let mut acc = ReachableTargets::empty(self.cells);
        for (_, child) in VmSearch::branches(state, v) {
            acc.union_with(&self.sweep(&child)?);
            if acc.is_full() {
                break;
            }
        }
        self.memo.insert(key, acc.words.clone());
        Ok(acc.words)
    }
}

/// Set of all labeled graphs on `u` that arise as vertex-minors of `g`.
pub fn reachable_targets(g: &Graph, u: &[Label], budget: u64) -> Result<ReachableTargets> {
    let mut u_sorted = u.to_vec();
    u_sorted.sort_unstable();
    u_sorted.dedup();
    if u_sorted.iter().any(|&v| !g.is_live(v)) {
        return Err(Error::Labels("U must consist of live labels".into()));
    }
    let k = u_sorted.len();
    if k > 4 {
        return Err(Error::Budget(format!("target sweep holds 2^C(k,2) bits; k = {k} > 4")));
    }
    let cells = k * (k.saturating_sub(1)) / 2;
    let mut ctx = SweepCtx { u: u_sorted, cells, memo: HashMap::new(), expanded: 0, budget };
    let words = ctx.sweep(g)?;
    Ok(ReachableTargets { words, cells })
}

/// Outcome of a `k`-vertex-minor universality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalityOutcome {
    Universal,
    /// First failing pair in `(U, H)` order: `h` is not a vertex-minor on `u`.
    NotUniversal { u: Vec<Label>, h: Graph },
    /// Some `U`-sweep ran out of budget before any earlier failure was found.
    BudgetExceeded,
}

/// Builds the graph on exactly the labels `u` (sorted) with colex edge mask
/// `mask` over positions in `u`.
pub fn graph_on_labels(u: &[Label], mask: u64) -> Graph {
    let capacity = u.iter().max().map_or(0, |m| m + 1);
    let mut g = Graph::edgeless(capacity);
    for v in g.live_labels() {
        if !u.contains(&v) {
            g = g.delete_vertex(v).expect("live");
        }
    }
    for b in 0..u.len() {
        for a in 0..b {
            if mask >> crate::pair_index(a, b) & 1 == 1 {
                g.add_edge(u[a], u[b]);
            }
        }
    }
    g
}

/// All `k`-subsets of `items`, ascending lexicographic.
pub fn k_subsets(items: &[Label], k: usize) -> Vec<Vec<Label>> {
    fn rec(items: &[Label], k: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Checks `k`-vertex-minor universality: every graph on every `k`-subset of
/// live labels must be a vertex-minor. The budget applies per `U`-sweep, so
/// the outcome is deterministic. `U` sets are scanned in ascending
/// lexicographic order and the first failure wins.
pub fn is_k_vm_universal(g: &Graph, k: usize, budget: u64) -> Result<UniversalityOutcome> {
    let labels = g.live_labels();
    if k > labels.len() {
        return Err(Error::Range(format!("k = {k} exceeds {} live labels", labels.len())));
    }
    use rayon::prelude::*;
    let subsets = k_subsets(&labels, k);
    let verdicts: Vec<Option<UniversalityOutcome>> = subsets
        .par_iter()
        .map(|u| match reachable_targets(g, u, budget) {
            Ok(set) => set.first_missing().map(|m| UniversalityOutcome::NotUniversal {
                u: u.clone(),
                h: graph_on_labels(u, m),
            }),
            Err(Error::Budget(_)) => Some(UniversalityOutcome::BudgetExceeded),
            Err(e) => panic!("unexpected sweep error: {e}"),
        })
        .collect();
    Ok(verdicts
        .into_iter()
        .flatten()
        .next()
        .unwrap_or(UniversalityOutcome::Universal))
}

/// All graphs reachable from `g` by local complementations, BFS to fixpoint.
/// Errors if the orbit would exceed `cap` graphs.
pub fn local_equivalence_orbit(g: &Graph, cap: usize) -> Result<Vec<Graph>> {
    orbit(g, cap, |state| {
        state.live_labels().iter().map(|&v| state.local_complement(v).expect("live")).collect()
    })
}

/// All graphs reachable from `g` by pivots, BFS to fixpoint.
pub fn pivot_orbit(g: &Graph, cap: usize) -> Result<Vec<Graph>> {
    orbit(g, cap, |state| {
        state.edges().iter().map(|&(u, v)| state.pivot(u, v).expect("edge")).collect()
    })
}

fn orbit(g: &Graph, cap: usize, neighbors: impl Fn(&Graph) -> Vec<Graph>) -> Result<Vec<Graph>> {
    let mut seen: HashSet<Graph> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone());
    queue.push_back(g.clone());
    while let Some(state) = queue.pop_front() {
        for next in neighbors(&state) {
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::Budget(format!("orbit exceeded cap {cap}")));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

struct PmSearch {
    target: OrderedBipartiteGraph,
    memo: HashMap<OrderedBipartiteGraph, bool>,
    expanded: u64,
    budget: u64,
}

impl PmSearch {
    fn choose_victim(&self, state: &OrderedBipartiteGraph) -> Option<Label> {
        let target_labels = self.target.live_labels();
        state.live_labels().into_iter().rev().find(|v| target_labels.binary_search(v).is_err())
    }

    fn branches(
        state: &OrderedBipartiteGraph,
        v: Label,
    ) -> Vec<(Option<Step>, OrderedBipartiteGraph)> {
        let mut out = Vec::with_capacity(2);
        out.push((None, state.delete_vertex(v).expect("v is live")));
        if let Some(u) = state.graph().neighbors(v).first().copied() {
            out.push((
                Some(Step::Pivot(v, u)),
                state.pivot(v, u).expect("edge").delete_vertex(v).expect("live"),
            ));
        }
        out
    }

    /// Base case: the target is a pivot-minor iff it is in the ordered-pivot
    /// orbit of the state. Returns the pivot sequence reaching it.
    fn base_sequence(&mut self, state: &OrderedBipartiteGraph) -> Result<Option<Vec<Step>>> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::Budget(format!("pivot-minor search exceeded {} nodes", self.budget)));
        }
        if state == &self.target {
            return Ok(Some(Vec::new()));
        }
        let mut parents: HashMap<OrderedBipartiteGraph, (OrderedBipartiteGraph, Step)> =
            HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(state.clone());
        let mut seen = HashSet::new();
        seen.insert(state.clone());
        while let Some(cur) = queue.pop_front() {
            for (u, v) in cur.edges() {
                let next = cur.pivot(u, v).expect("edge");
                if seen.insert(next.clone()) {
                    parents.insert(next.clone(), (cur.clone(), Step::Pivot(u, v)));
                    if next == self.target {
                        let mut seq = Vec::new();
                        let mut walk = next;
                        while let Some((prev, step)) = parents.get(&walk) {
                            seq.push(*step);
                            walk = prev.clone();
                        }
                        seq.reverse();
                        return Ok(Some(seq));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    fn decide(&mut self, state: &OrderedBipartiteGraph) -> Result<bool> {
        if let Some(&hit) = self.memo.get(state) {
            return Ok(hit);
        }
        let Some(v) = self.choose_victim(state) else {
            let hit = self.base_sequence(state)?.is_some();
            self.memo.insert(state.clone(), hit);
            return Ok(hit);
        };
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::Budget(format!("pivot-minor search exceeded {} nodes", self.budget)));
        }
        let mut found = false;
        for (_, child) in Self::branches(state, v) {
            if self.decide(&child)? {
                found = true;
                break;
            }
        }
        self.memo.insert(state.clone(), found);
        Ok(found)
    }

    fn extract(&mut self, state: &OrderedBipartiteGraph, w: &mut MinorWitness) -> Result<()> {
        let Some(v) = self.choose_victim(state) else {
            let seq = self.base_sequence(state)?.expect("base was decided true");
            w.ops.extend(seq);
            return Ok(());
        };
        for (op, child) in Self::branches(state, v) {
            if self.decide(&child)? {
                if let Some(op) = op {
                    w.ops.push(op);
                }
                w.deletions.push(v);
                return self.extract(&child, w);
            }
        }
        unreachable!("state was decided true but no branch is")
    }
}

/// Decides whether `h` is a pivot-minor of `g` in the ordered sense: the
/// surviving labels must carry `h`'s part assignment as well as its edges.
pub fn is_pivot_minor_ordered(
    g: &OrderedBipartiteGraph,
    h: &OrderedBipartiteGraph,
    budget: u64,
) -> Result<Option<MinorWitness>> {
    let g_labels = g.live_labels();
    if !h.live_labels().iter().all(|v| g_labels.binary_search(v).is_ok()) {
        return Err(Error::Labels("target labels must be live in the host".into()));
    }
    let mut search =
        PmSearch { target: h.clone(), memo: HashMap::new(), expanded: 0, budget };
    if !search.decide(g)? {
        return Ok(None);
    }
    let mut witness = MinorWitness::trivial();
    search.extract(g, &mut witness)?;
    debug_assert_eq!(&witness.replay_bipartite(g)?, h);
    Ok(Some(witness))
}

/// Every pivot-minor of `g` (all label subsets, all reachable part
/// assignments and edge sets): the two-branch elimination closure, with each
/// elimination state expanded to its full ordered-pivot orbit.
pub fn pivot_minor_closure(
    g: &OrderedBipartiteGraph,
    budget: u64,
) -> Result<HashSet<OrderedBipartiteGraph>> {
    let mut elim = HashSet::new();
    let mut queue = vec![g.clone()];
    elim.insert(g.clone());
    while let Some(state) = queue.pop() {
        if elim.len() as u64 > budget {
            return Err(Error::Budget(format!("pivot-minor closure exceeded {budget} states")));
        }
        for v in state.live_labels() {
            for (_, child) in PmSearch::branches(&state, v) {
                if elim.insert(child.clone()) {
                    queue.push(child);
                }
            }
        }
    }
    let mut out = HashSet::new();
    for state in elim {
        let mut stack = vec![state.clone()];
        out.insert(state);
        while let Some(cur) = stack.pop() {
            if out.len() as u64 > budget {
                return Err(Error::Budget(format!("pivot-minor closure exceeded {budget} states")));
            }
            for (u, v) in cur.edges() {
                let next = cur.pivot(u, v).expect("edge");
                if out.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::apply_comps;

    const B: u64 = DEFAULT_BUDGET;

    /// Orbit brute force: H is a vertex-minor of G iff some locally
    /// equivalent graph restricts to exactly H.
    fn vm_brute(g: &Graph, h: &Graph) -> bool {
        let labels = h.live_labels();
        local_equivalence_orbit(g, 1 << 20)
            .unwrap()
            .iter()
            .any(|m| &m.induced_subgraph(&labels).unwrap() == h)
    }

    #[test]
    fn trivial_witness_when_equal() {
        let g = Graph::sample_uniform(5, 8);
        let w = is_vertex_minor(&g, &g, B).unwrap().unwrap();
        assert!(w.ops.is_empty() && w.deletions.is_empty());
    }

    #[test]
    fn complete_graph_contains_independent_set() {
        // K_{k+1} restricted after complementing at the extra vertex.
        for k in 1..=4 {
            let n = k + 1;
            let edges: Vec<(Label, Label)> =
                (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
            let g = Graph::from_edges(n, &edges);
            let h = graph_on_labels(&(0..k).collect::<Vec<_>>(), 0);
            let w = is_vertex_minor(&g, &h, B).unwrap().expect("independent set is a vm");
            assert_eq!(&w.replay(&g).unwrap(), &h);
        }
    }

    pub(crate) fn wheel6() -> Graph {
        let mut edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)];
        edges.extend([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
        Graph::from_edges(6, &edges)
    }

    #[test]
    fn wheel6_has_no_independent_3_minor() {
        let g = wheel6();
        for u in k_subsets(&(0..6).collect::<Vec<_>>(), 3) {
            let h = graph_on_labels(&u, 0);
            assert!(is_vertex_minor(&g, &h, B).unwrap().is_none(), "U = {u:?}");
        }
    }

    #[test]
    fn recursion_agrees_with_orbit_brute_force_n4() {
        // Exhaustive cross-check on all (G, H) pairs for n = 4; the n = 5
        // sweep lives in the acceptance suite.
        for gmask in 0u64..1 << 6 {
            let g = Graph::from_edge_mask(4, gmask);
            let orbit = local_equivalence_orbit(&g, 1 << 12).unwrap();
            for size in 1..=4usize {
                for u in k_subsets(&[0, 1, 2, 3], size) {
                    let readouts: HashSet<u64> =
                        orbit.iter().map(|m| m.induced_edge_mask(&u)).collect();
                    let cells = size * (size - 1) / 2;
                    for hmask in 0u64..1 << cells {
                        let h = graph_on_labels(&u, hmask);
                        let got = is_vertex_minor(&g, &h, B).unwrap();
                        assert_eq!(got.is_some(), readouts.contains(&hmask));
                        if let Some(w) = got {
                            assert_eq!(&w.replay(&g).unwrap(), &h);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reachable_targets_matches_single_queries() {
        for trial in 0..40 {
            let g = Graph::sample_uniform(6, 300 + trial);
            let u = vec![1, 3, 4];
            let set = reachable_targets(&g, &u, B).unwrap();
            for hmask in 0u64..8 {
                let h = graph_on_labels(&u, hmask);
                assert_eq!(
                    set.contains(hmask),
                    is_vertex_minor(&g, &h, B).unwrap().is_some(),
                    "trial {trial} mask {hmask}"
                );
            }
        }
    }

    #[test]
    fn universality_examples() {
        // Any graph with one vertex is 1-universal.
        let g = Graph::sample_uniform(3, 5);
        assert_eq!(is_k_vm_universal(&g, 1, B).unwrap(), UniversalityOutcome::Universal);
        // The edgeless graph on n >= 2 is not 2-universal: no edge can appear.
        let e = Graph::edgeless(4);
        match is_k_vm_universal(&e, 2, B).unwrap() {
            UniversalityOutcome::NotUniversal { u, h } => {
                assert_eq!(u, vec![0, 1]);
                assert_eq!(h.edge_count(), 1);
            }
            other => panic!("expected failure, got {other:?}"),
        }
        // K_3 is 2-universal.
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(is_k_vm_universal(&k3, 2, B).unwrap(), UniversalityOutcome::Universal);
    }

    #[test]
    fn budget_is_reported() {
        let g = Graph::sample_uniform(9, 77);
        let h = graph_on_labels(&[0, 1, 2], 0);
        assert!(matches!(is_vertex_minor(&g, &h, 3), Err(Error::Budget(_))));
        assert_eq!(is_k_vm_universal(&g, 2, 2).unwrap(), UniversalityOutcome::BudgetExceeded);
    }

    #[test]
    fn monotonicity_on_random_chains() {
        // H vm of G and G vm of G' imply H vm of G'.
        for trial in 0..60 {
            let gp = Graph::sample_uniform(6, 4000 + trial);
            let seq: Vec<Label> = vec![(trial % 6) as usize, ((trial * 3 + 1) % 6) as usize];
            let g = apply_comps(&gp, &seq).unwrap().delete_vertex(5).unwrap();
            let h = apply_comps(&g, &[(trial % 5) as usize]).unwrap().delete_vertex(4).unwrap();
            assert!(is_vertex_minor(&gp, &g, B).unwrap().is_some());
            assert!(is_vertex_minor(&g, &h, B).unwrap().is_some());
            assert!(is_vertex_minor(&gp, &h, B).unwrap().is_some());
        }
    }

    #[test]
    fn orbit_properties() {
        let e = Graph::edgeless(4);
        assert_eq!(local_equivalence_orbit(&e, 10).unwrap().len(), 1);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let orbit = local_equivalence_orbit(&p3, 100).unwrap();
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(orbit.contains(&k3));
        // Orbit size is at most 3^n on small graphs.
        for mask in 0u64..1 << 10 {
            let g = Graph::from_edge_mask(5, mask);
            assert!(local_equivalence_orbit(&g, 1 << 12).unwrap().len() <= 243);
        }
        assert!(matches!(local_equivalence_orbit(&p3, 1), Err(Error::Budget(_))));
    }

    #[test]
    fn pivot_minor_single_edge_part_swap() {
        let g = OrderedBipartiteGraph::new(&[0], &[1], &[(0, 1)]).unwrap();
        let h = OrderedBipartiteGraph::new(&[1], &[0], &[(0, 1)]).unwrap();
        let w = is_pivot_minor_ordered(&g, &h, B).unwrap().expect("pivot swaps the parts");
        assert_eq!(w.ops.len(), 1);
        assert_eq!(&w.replay_bipartite(&g).unwrap(), &h);
        // Same edges with the original parts: trivial witness.
        assert!(is_pivot_minor_ordered(&g, &g, B).unwrap().unwrap().ops.is_empty());
    }

    #[test]
    fn pivot_minors_are_vertex_minors() {
        for trial in 0..150 {
            let g = OrderedBipartiteGraph::sample_uniform(3, 3, 9_100 + trial);
            let closure = pivot_minor_closure(&g, 1 << 16).unwrap();
            for h in closure.iter().filter(|h| !h.live_labels().is_empty()).take(8) {
                assert!(is_vertex_minor(g.graph(), h.graph(), B).unwrap().is_some());
            }
        }
    }

    #[test]
    fn pm_recursion_agrees_with_closure() {
        for trial in 0..60 {
            let g = OrderedBipartiteGraph::sample_uniform(2, 3, 17_000 + trial);
            let closure = pivot_minor_closure(&g, 1 << 16).unwrap();
            for h in closure.iter().take(12) {
                let w = is_pivot_minor_ordered(&g, h, B).unwrap();
                assert!(w.is_some(), "closure member not found");
            }
            let labels = g.live_labels();
            let h = OrderedBipartiteGraph::new(&labels, &[], &[]).unwrap();
            assert_eq!(
                is_pivot_minor_ordered(&g, &h, B).unwrap().is_some(),
                closure.contains(&h)
            );
        }
    }

    #[test]
    fn witness_json_shape() {
        let w = MinorWitness { ops: vec![Step::Comp(2), Step::Pivot(0, 3)], deletions: vec![2, 0] };
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"ops":[[2],[0,3]],"deletions":[2,0]}"#);
        assert_eq!(serde_json::from_str::<MinorWitness>(&json).unwrap(), w);
    }

    #[test]
    fn vm_brute_agrees_spot_checks() {
        for trial in 0..30 {
            let g = Graph::sample_uniform(5, 21_000 + trial);
            let u = vec![0, 2, 4];
            for hmask in 0u64..8 {
                let h = graph_on_labels(&u, hmask);
                assert_eq!(is_vertex_minor(&g, &h, B).unwrap().is_some(), vm_brute(&g, &h));
            }
        }
    }
}
