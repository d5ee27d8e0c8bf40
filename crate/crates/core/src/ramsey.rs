//! Vertex-minor Ramsey machinery: independent sets as vertex-minors, exact
//! small values of the vertex-minor Ramsey number, and the pivot-minor
//! variant with cliques allowed.

use crate::canon::graph_classes;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minor::{graph_on_labels, is_vertex_minor, k_subsets, pivot_orbit};
use crate::Label;

/// How to decide independent-set containment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VmEngine {
    /// Enumerate the local-equivalence orbit and scan independence numbers.
    Orbit,
    /// Run the elimination recursion per k-subset.
    Recursion,
}

/// Maximum independent set size, by branch and bound on neighbor bitmasks.
pub fn independence_number(g: &Graph) -> usize {
    let labels = g.live_labels();
    assert!(labels.len() <= 24, "independence scan is for small graphs");
    let rows: Vec<u64> = labels
        .iter()
        .map(|&v| {
            let mut row = 0u64;
            for (i, &u) in labels.iter().enumerate() {
                if u != v && g.has_edge(u, v) {
                    row |= 1 << i;
                }
            }
            row
        })
        .collect();
    fn go(rows: &[u64], cand: u64) -> usize {
        if cand == 0 {
            return 0;
        }
        let v = cand.trailing_zeros() as usize;
        let without = go(rows, cand & !(1 << v));
        let with = 1 + go(rows, cand & !(1 << v) & !rows[v]);
        with.max(without)
    }
    go(&rows, (1u64 << labels.len()) - 1)
}

/// Maximum clique size (independence number of the complement).
pub fn clique_number(g: &Graph) -> usize {
    let labels = g.live_labels();
    let mut comp = Graph::edgeless(g.capacity());
    for v in comp.clone().live_labels() {
        if !labels.contains(&v) {
            comp = comp.delete_vertex(v).expect("live");
        }
    }
    for j in 0..labels.len() {
        for i in 0..j {
            if !g.has_edge(labels[i], labels[j]) {
                comp.add_edge(labels[i], labels[j]);
            }
        }
    }
    independence_number(&comp)
}

fn orbit_cap(n: usize) -> usize {
    3usize.checked_pow(n as u32).map_or(usize::MAX, |c| c + 1)
}

/// True iff some `k`-subset of labels carries the edgeless graph as a
/// vertex-minor of `g`.
pub fn contains_independent_vm(g: &Graph, k: usize, engine: VmEngine, budget: u64) -> Result<bool> {
    let n = g.live_count();
    if k > n {
        return Ok(false);
    }
    match engine {
        VmEngine::Orbit => {
            if n > 10 {
                return Err(Error::Budget(format!("orbit engine caps at 10 vertices, got {n}")));
            }
            // Early exit while building the orbit: stop at the first member
            // with a large enough independent set.
            let mut seen = std::collections::HashSet::new();
            let mut queue = std::collections::VecDeque::new();
            seen.insert(g.clone());
            queue.push_back(g.clone());
            if independence_number(g) >= k {
                return Ok(true);
            }
            while let Some(state) = queue.pop_front() {
                for v in state.live_labels() {
                    let next = state.local_complement(v).expect("live");
                    if seen.contains(&next) {
                        continue;
                    }
                    if independence_number(&next) >= k {
                        return Ok(true);
                    }
                    if seen.len() >= orbit_cap(n) {
                        return Err(Error::Budget("orbit cap exceeded".into()));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
            Ok(false)
        }
        VmEngine::Recursion => {
            let labels = g.live_labels();
            for u in k_subsets(&labels, k) {
                let target = graph_on_labels(&u, 0);
                if is_vertex_minor(g, &target, budget)?.is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// True iff `g` contains a size-`k` clique or independent set as a
/// pivot-minor, via the pivot orbit.
pub fn contains_clique_or_independent_pm(g: &Graph, k: usize, cap: usize) -> Result<bool> {
    if k > g.live_count() {
        return Ok(false);
    }
    for member in pivot_orbit(g, cap)? {
        if independence_number(&member) >= k || clique_number(&member) >= k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of an exhaustive Ramsey-number scan.
#[derive(Debug, Clone)]
pub struct RamseyResult {
    pub value: usize,
    /// Counterexample isomorphism classes on `value - 1` vertices.
    pub counterexamples: Vec<Graph>,
}

/// Exact `R_vm(k)`: the least `n` such that every `n`-vertex graph contains
/// the size-`k` independent set as a vertex-minor; exhaustive over
/// isomorphism classes, scanning `n` upward. `k <= 3` only.
pub fn vm_ramsey(k: usize) -> Result<RamseyResult> {
    if k == 0 || k > 3 {
        return Err(Error::Budget(format!(
            "exhaustive R_vm is desk-scale only for 1 <= k <= 3, got {k}"
        )));
    }
    let mut last_failures: Vec<Graph> = Vec::new();
    for n in k.. {
        let mut failures = Vec::new();
        for mask in graph_classes(n) {
            let g = Graph::from_edge_mask(n, mask);
            if !contains_independent_vm(&g, k, VmEngine::Orbit, 0)? {
                failures.push(g);
            }
        }
        if failures.is_empty() {
            return Ok(RamseyResult { value: n, counterexamples: last_failures });
        }
        last_failures = failures;
    }
    unreachable!("the scan terminates by the 2^k - 1 upper bound")
}

/// Exact `R_piv(k)` for `k <= 3`: least `n` such that every `n`-vertex graph
/// contains a size-`k` clique or independent set as a pivot-minor.
pub fn pm_ramsey(k: usize) -> Result<RamseyResult> {
    if k == 0 || k > 3 {
        return Err(Error::Budget(format!(
            "exhaustive R_piv is desk-scale only for 1 <= k <= 3, got {k}"
        )));
    }
    let mut last_failures: Vec<Graph> = Vec::new();
    for n in 1.. {
        let mut failures = Vec::new();
        for mask in graph_classes(n) {
            let g = Graph::from_edge_mask(n, mask);
            if !contains_clique_or_independent_pm(&g, k, orbit_cap(n))? {
                failures.push(g);
            }
        }
        if failures.is_empty() {
            return Ok(RamseyResult { value: n, counterexamples: last_failures });
        }
        last_failures = failures;
    }
    unreachable!("the scan terminates by the classical Ramsey bound")
}

/// Exact classical `R(k) = R(k,k)` by exhaustive scan; `k <= 3`.
pub fn classical_ramsey(k: usize) -> Result<usize> {
    if k == 0 || k > 3 {
        return Err(Error::Budget("classical scan is desk-scale only for k <= 3".into()));
    }
    for n in 1.. {
        let all = graph_classes(n).into_iter().all(|mask| {
            let g = Graph::from_edge_mask(n, mask);
            independence_number(&g) >= k || clique_number(&g) >= k
        });
        if all {
            return Ok(n);
        }
    }
    unreachable!()
}

/// The wheel on 6 vertices: hub 0 joined to the 5-cycle 1-2-3-4-5-1.
pub fn wheel6() -> Graph {
    let mut edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)];
    edges.extend([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
    Graph::from_edges(6, &edges)
}

/// All maximum independent sets of a small graph.
pub fn maximum_independent_sets(g: &Graph) -> Vec<Vec<Label>> {
    let labels = g.live_labels();
    let alpha = independence_number(g);
    k_subsets(&labels, alpha)
        .into_iter()
        .filter(|s| {
            (0..s.len()).all(|b| (0..b).all(|a| !g.has_edge(s[a], s[b])))
        })
        .collect()
}

/// Checks the neighborhood-class structure forced on an extremal graph: with
/// `u` a maximum independent set, `V_S = {v : N(v) cap u = S}` must satisfy
/// `|V_empty| = 0` and `|V_S| <= min(2, |S|)`.
pub fn extremal_partition_ok(g: &Graph, u: &[Label]) -> bool {
    use std::collections::HashMap;
    let mut sizes: HashMap<Vec<Label>, usize> = HashMap::new();
    for v in g.live_labels() {
        if u.contains(&v) {
            continue;
        }
        let s: Vec<Label> = u.iter().copied().filter(|&x| g.has_edge(v, x)).collect();
        *sizes.entry(s).or_insert(0) += 1;
    }
    sizes.iter().all(|(s, &count)| !s.is_empty() && count <= 2.min(s.len()))
}
