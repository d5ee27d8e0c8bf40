//! Binary matroids as F2 representation matrices over a labeled ground set.
//!
//! A matroid is stored as a full-row-rank `r x n` matrix whose columns follow
//! the sorted ground labels. Equality is semantic: two matroids are equal when
//! their independence oracles agree (representations differ by row
//! operations, so raw matrices are never compared). The fundamental-graph
//! bridge ties these to ordered bipartite graphs: `M(L,R,E)` is represented
//! by `[I_R A]`, and pivot-minors of the graph correspond to labeled minors
//! of the matroid.

use crate::bipartite::OrderedBipartiteGraph;
use crate::error::{Error, Result};
use crate::f2::{gaussian_binomial, rank_f2, rref_bases, BigCount, BitMatrix};
use crate::rng::CounterRng;
use crate::Label;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Largest ground size accepted by basis enumeration.
pub const MAX_BASIS_ENUM_GROUND: usize = 24;

#[derive(Debug, Clone)]
pub struct BinaryMatroid {
    ground: Vec<Label>,
    rep: BitMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorOp {
    Delete,
    Contract,
}

#[derive(Serialize, Deserialize)]
struct MatroidJson {
    ground: Vec<Label>,
    rows: usize,
    columns_bits: Vec<u64>,
}

impl BinaryMatroid {
    /// Builds from a representation matrix; rows with no effect are dropped
    /// so the stored matrix always has full row rank.
    pub fn new(ground: Vec<Label>, rep: BitMatrix) -> Result<Self> {
        let mut g = ground;
        g.sort_unstable();
        g.dedup();
        if g.len() != rep.cols() {
            return Err(Error::Shape(format!(
                "{} ground labels vs {} columns",
                g.len(),
                rep.cols()
            )));
        }
        let (reduced, rank) = rep.rref();
        let compact = BitMatrix::from_fn(rank, rep.cols(), |i, j| reduced.get(i, j));
        Ok(BinaryMatroid { ground: g, rep: compact })
    }

    /// The matroid `M(L,R,E)` of an ordered bipartite graph: ground `L + R`,
    /// rank `|R|`, the `R`-columns forming an identity and each `L`-column
    /// carrying its adjacency to `R`.
    pub fn from_fundamental(b: &OrderedBipartiteGraph) -> Self {
        let right = b.right_labels().to_vec();
        let mut ground: Vec<Label> = b.live_labels();
        ground.sort_unstable();
        let rep = BitMatrix::from_fn(right.len(), ground.len(), |i, j| {
            let col = ground[j];
            if let Some(pos) = right.iter().position(|&x| x == col) {
                pos == i
            } else {
                b.has_edge(col, right[i])
            }
        });
        BinaryMatroid { ground, rep }
    }

    pub fn ground(&self) -> &[Label] {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rep.rows()
    }

    pub fn representation(&self) -> &BitMatrix {
        &self.rep
    }

    fn col_of(&self, e: Label) -> Result<usize> {
        self.ground
            .binary_search(&e)
            .map_err(|_| Error::Labels(format!("{e} is not a ground element")))
    }

    /// Rank of the column set indexed by `labels`.
    pub fn rank_of(&self, labels: &[Label]) -> Result<usize> {
        let cols: Vec<usize> = labels.iter().map(|&e| self.col_of(e)).collect::<Result<_>>()?;
        let m = BitMatrix::from_fn(self.rank(), cols.len(), |i, j| self.rep.get(i, cols[j]));
        Ok(rank_f2(&m))
    }

    pub fn is_independent(&self, labels: &[Label]) -> Result<bool> {
        Ok(self.rank_of(labels)? == labels.len())
    }

    /// Independence oracle over every subset, as a bitmask keyed by ground
    /// positions; the canonical equality/memo key for small grounds.
    pub fn independence_key(&self) -> Result<(Vec<Label>, Vec<u64>)> {
        let n = self.ground.len();
        if n > 20 {
            return Err(Error::Budget(format!("independence key enumerates 2^{n} subsets")));
        }
        let mut bits = vec![0u64; (1usize << n).div_ceil(64)];
        for subset in 0u64..1 << n {
            let labels: Vec<Label> = (0..n)
                .filter(|&i| subset >> i & 1 == 1)
                .map(|i| self.ground[i])
                .collect();
            if labels.len() <= self.rank() && self.is_independent(&labels)? {
                bits[(subset / 64) as usize] |= 1 << (subset % 64);
            }
        }
        Ok((self.ground.clone(), bits))
    }

    /// Deletion or contraction of one element. Contracting a loop deletes it
    /// (the standard convention).
    pub fn minor_op(&self, e: Label, op: MinorOp) -> Result<BinaryMatroid> {
        let col = self.col_of(e)?;
        let r = self.rank();
        let n = self.ground.len();
        let mut ground = self.ground.clone();
        ground.remove(col);
        let keep = |j: usize| if j < col { j } else { j + 1 };
        let is_loop = (0..r).all(|i| !self.rep.get(i, col));
        if op == MinorOp::Delete || is_loop {
            let rep = BitMatrix::from_fn(r, n - 1, |i, j| self.rep.get(i, keep(j)));
            return BinaryMatroid::new(ground, rep);
        }
        // Pivot e into the basis, then drop its row and column.
        let pivot_row = (0..r).find(|&i| self.rep.get(i, col)).expect("non-loop");
        let mut work = self.rep.clone();
        for i in 0..r {
            if i != pivot_row && work.get(i, col) {
                for j in 0..n {
                    let v = work.get(pivot_row, j) ^ work.get(i, j);
                    work.set(i, j, v);
                }
            }
        }
        let row_of = |i: usize| if i < pivot_row { i } else { i + 1 };
        let rep = BitMatrix::from_fn(r - 1, n - 1, |i, j| work.get(row_of(i), keep(j)));
        BinaryMatroid::new(ground, rep)
    }

    /// The fundamental graph with respect to `basis`: parts
    /// `(ground minus basis, basis)`, with `v in L` adjacent to the basis
    /// elements of its fundamental circuit.
    pub fn fundamental_graph(&self, basis: &[Label]) -> Result<OrderedBipartiteGraph> {
        let mut basis_sorted = basis.to_vec();
        basis_sorted.sort_unstable();
        basis_sorted.dedup();
        if basis_sorted.len() != self.rank() || !self.is_independent(&basis_sorted)? {
            return Err(Error::NotBasis(format!("{basis_sorted:?} is not a basis")));
        }
        let cols: Vec<usize> =
            basis_sorted.iter().map(|&e| self.col_of(e)).collect::<Result<_>>()?;
        // Row-reduce so basis column i becomes e_i.
        let r = self.rank();
        let n = self.ground.len();
        let mut work = self.rep.clone();
        for (target_row, &bc) in cols.iter().enumerate() {
            let pr = (target_row..r).find(|&i| work.get(i, bc)).expect("basis is independent");
            if pr != target_row {
                for j in 0..n {
                    let (a, b) = (work.get(target_row, j), work.get(pr, j));
                    work.set(target_row, j, b);
                    work.set(pr, j, a);
                }
            }
            for i in 0..r {
                if i != target_row && work.get(i, bc) {
                    for j in 0..n {
                        let v = work.get(target_row, j) ^ work.get(i, j);
                        work.set(i, j, v);
                    }
                }
            }
        }
        let left: Vec<Label> =
            self.ground.iter().copied().filter(|e| basis_sorted.binary_search(e).is_err()).collect();
        let mut edges = Vec::new();
        for &l in &left {
            let lc = self.col_of(l)?;
            for (i, &b) in basis_sorted.iter().enumerate() {
                if work.get(i, lc) {
                    edges.push((l, b));
                }
            }
        }
        OrderedBipartiteGraph::new(&left, &basis_sorted, &edges)
    }

    /// All bases, as sorted label lists. Ground size capped.
    pub fn bases(&self) -> Result<Vec<Vec<Label>>> {
        if self.ground.len() > MAX_BASIS_ENUM_GROUND {
            return Err(Error::Budget(format!(
                "basis enumeration caps at {MAX_BASIS_ENUM_GROUND} elements"
            )));
        }
        let r = self.rank();
        let mut out = Vec::new();
        for subset in crate::minor::k_subsets(&self.ground, r) {
            if self.is_independent(&subset)? {
                out.push(subset);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let columns_bits: Vec<u64> = (0..self.ground.len())
            .map(|j| (0..self.rank()).filter(|&i| self.rep.get(i, j)).map(|i| 1u64 << i).sum())
            .collect();
        serde_json::to_string(&MatroidJson {
            ground: self.ground.clone(),
            rows: self.rank(),
            columns_bits,
        })
        .expect("matroid serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: MatroidJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let rep = BitMatrix::from_fn(parsed.rows, parsed.columns_bits.len(), |i, j| {
            parsed.columns_bits[j] >> i & 1 == 1
        });
        BinaryMatroid::new(parsed.ground, rep)
    }
}

/// Semantic equality: same ground, same rank, same independence oracle on
/// every subset of size at most the rank.
pub fn matroid_eq(a: &BinaryMatroid, b: &BinaryMatroid) -> Result<bool> {
    if a.ground != b.ground || a.rank() != b.rank() {
        return Ok(false);
    }
    for size in 1..=a.rank() {
        for s in crate::minor::k_subsets(&a.ground, size) {
            if a.is_independent(&s)? != b.is_independent(&s)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact number of bases.
pub fn count_bases(m: &BinaryMatroid) -> Result<BigCount> {
    Ok(BigUint::from(m.bases()?.len()))
}

/// Labeled minor containment: some delete/contract sequence on
/// `ground(M) minus ground(N)` yields a matroid equal to `N`.
pub fn is_minor(m: &BinaryMatroid, n: &BinaryMatroid) -> Result<bool> {
    if !n.ground.iter().all(|e| m.ground.binary_search(e).is_ok()) {
        return Err(Error::Labels("minor ground must lie inside the host ground".into()));
    }
    let Some(&victim) =
        m.ground.iter().rev().find(|e| n.ground.binary_search(e).is_err())
    else {
        return matroid_eq(m, n);
    };
    for op in [MinorOp::Delete, MinorOp::Contract] {
        if is_minor(&m.minor_op(victim, op)?, n)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All labeled minors of `m`, as independence keys (with their grounds).
pub fn minor_closure_keys(
    m: &BinaryMatroid,
) -> Result<std::collections::HashSet<(Vec<Label>, Vec<u64>)>> {
    let mut out = std::collections::HashSet::new();
    let mut stack = vec![m.clone()];
    out.insert(m.independence_key()?);
    while let Some(cur) = stack.pop() {
        for &e in cur.ground() {
            for op in [MinorOp::Delete, MinorOp::Contract] {
                let child = cur.minor_op(e, op)?;
                if out.insert(child.independence_key()?) {
                    stack.push(child);
                }
            }
        }
    }
    Ok(out)
}

/// Uniformly random rank-`r` binary matroid on ground `0..n`, by rejection
/// sampling full-rank `r x n` matrices.
pub fn sample_uniform_matroid(r: usize, n: usize, seed: u64) -> Result<BinaryMatroid> {
    if r > n {
        return Err(Error::Shape(format!("rank {r} exceeds ground size {n}")));
    }
    let mut rng = CounterRng::new(seed);
    for _ in 0..10_000 {
        let m = BitMatrix::random(r, n, &mut rng);
        if rank_f2(&m) == r {
            return BinaryMatroid::new((0..n).collect(), m);
        }
    }
    Err(Error::Budget("rejection sampling failed to hit a full-rank matrix".into()))
}

/// Exact rank distribution of the uniformly random binary matroid on `[n]`:
/// weight of rank `r` is the Gaussian binomial `[n r]_2`, normalized by the
/// total subspace count.
pub fn rank_distribution_uniform_matroid(n: usize) -> Result<(Vec<BigCount>, BigCount)> {
    if n > 64 {
        return Err(Error::Range(format!("rank distribution supports n <= 64, got {n}")));
    }
    let weights: Vec<BigCount> =
        (0..=n).map(|r| gaussian_binomial(n, r)).collect::<Result<_>>()?;
    let total = weights.iter().sum();
    Ok((weights, total))
}

/// Uniformly random binary matroid on `[n]` (rank unconstrained): rank drawn
/// by the exact subspace weights, then a uniform rank-`r` matroid.
pub fn sample_uniform_matroid_any_rank(n: usize, seed: u64) -> Result<BinaryMatroid> {
    if n > 22 {
        return Err(Error::Budget("any-rank sampler keeps subspace totals in u128; n <= 22".into()));
    }
    let (weights, total) = rank_distribution_uniform_matroid(n)?;
    let total = total.to_u128().expect("fits by the n guard");
    let mut rng = CounterRng::new(seed);
    let mut draw = {
        // 128-bit uniform below total, by rejection.
        let zone = u128::MAX - (u128::MAX % total + 1) % total;
        loop {
            let v = (u128::from(rng.next_u64()) << 64) | u128::from(rng.next_u64());
            if v <= zone {
                break v % total;
            }
        }
    };
    let mut rank = 0;
    for (r, w) in weights.iter().enumerate() {
        let w = w.to_u128().expect("fits");
        if draw < w {
            rank = r;
            break;
        }
        draw -= w;
    }
    sample_uniform_matroid(rank, n, rng.next_u64())
}

/// All rank-`r` binary matroids on ground `0..n`, one per subspace (RREF
/// representatives).
pub fn enumerate_matroids(r: usize, n: usize) -> Result<Vec<BinaryMatroid>> {
    if r > n {
        return Err(Error::Range(format!("rank {r} exceeds ground size {n}")));
    }
    rref_bases(n, r)
        .into_iter()
        .map(|rep| BinaryMatroid::new((0..n).collect(), rep))
        .collect()
}

/// The partition-alignment walk: move each target in `y1` from `R` into `L`
/// by pivoting on the first fresh `v1s`-vertex adjacent to it (deleting the
/// spent vertex either way), then symmetrically move `y2` using `v2s`, and
/// delete whatever remains of both scratch sets. Returns `None` when a
/// scratch set runs out before its targets are all moved. Edges are revealed
/// in a fixed order (scratch ascending against the current target), so runs
/// are reproducible.
pub fn align_partition(
    b: &OrderedBipartiteGraph,
    v1s: &[Label],
    v2s: &[Label],
    y1: &[Label],
    y2: &[Label],
) -> Result<Option<OrderedBipartiteGraph>> {
    let in_left = |s: &[Label]| s.iter().all(|&v| b.is_left(v));
    let in_right = |s: &[Label]| s.iter().all(|&v| b.is_right(v));
    if !in_left(v1s) || !in_left(y2) || !in_right(v2s) || !in_right(y1) {
        return Err(Error::Precondition("alignment sets must respect the parts".into()));
    }
    if v1s.len() != v2s.len() {
        return Err(Error::Precondition("scratch sets must have equal size".into()));
    }
    let mut all: Vec<Label> =
        v1s.iter().chain(v2s).chain(y1).chain(y2).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("alignment sets must be pairwise disjoint".into()));
    }

    fn phase(
        mut cur: OrderedBipartiteGraph,
        scratch: &[Label],
        targets: &[Label],
    ) -> Result<Option<OrderedBipartiteGraph>> {
        let mut scratch: Vec<Label> = {
            let mut s = scratch.to_vec();
            s.sort_unstable();
            s.into_iter().collect()
        };
        let mut targets = targets.to_vec();
        targets.sort_unstable();
        let mut next_scratch = 0usize;
        for &y in &targets {
            let mut moved = false;
            while next_scratch < scratch.len() {
                let v = scratch[next_scratch];
                next_scratch += 1;
                if cur.has_edge(v, y) {
                    cur = cur.pivot(v, y)?.delete_vertex(v)?;
                    moved = true;
                    break;
                }
                cur = cur.delete_vertex(v)?;
            }
            if !moved {
                return Ok(None);
            }
        }
        for &v in scratch.drain(next_scratch..).as_slice() {
            cur = cur.delete_vertex(v)?;
        }
        Ok(Some(cur))
    }

    let Some(mid) = phase(b.clone(), v1s, y1)? else {
        return Ok(None);
    };
    phase(mid, v2s, y2)
}
