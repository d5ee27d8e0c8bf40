//! Bit-packed linear algebra over F2.
//!
//! Rows are packed into `u64` words so row XOR (the elimination workhorse)
//! runs word-parallel. Counting helpers that can overflow a native integer
//! ([`gaussian_binomial`], subspace totals) return [`BigCount`]; everything
//! else stays in `usize` and asserts loudly on overflow.

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use num_bigint::BigUint;
use num_traits::One;
use std::collections::BTreeMap;

/// Exact nonnegative count with no overflow.
pub type BigCount = BigUint;

/// Largest `k` accepted by [`rank_census`]: the census enumerates all
/// `2^C(k,2)` labeled graphs, which is 32768 at `k = 6`.
pub const RANK_CENSUS_MAX_K: usize = 6;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Dense matrix over F2, row-major, each row packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols).max(1);
        BitMatrix { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from closures; convenient for tests and samplers.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Uniformly random matrix; one fair bit per entry in row-major order.
    pub fn random(rows: usize, cols: usize, rng: &mut CounterRng) -> Self {
        BitMatrix::from_fn(rows, cols, |_, _| rng.next_bit())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry accessor. Out-of-range indices are a caller bug and panic.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.data[i * self.words_per_row + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = i * self.words_per_row + j / WORD_BITS;
        let bit = 1u64 << (j % WORD_BITS);
        if value {
            self.data[w] |= bit;
        } else {
            self.data[w] &= !bit;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (src * self.words_per_row, dst * self.words_per_row);
        for w in 0..self.words_per_row {
            let v = self.data[a + w];
            self.data[b + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            self.data.swap(a * self.words_per_row + w, b * self.words_per_row + w);
        }
    }

    /// True iff the matrix is symmetric with zero diagonal (an adjacency
    /// matrix of a simple graph).
    pub fn is_symmetric_zero_diagonal(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            if self.get(i, i) {
                return false;
            }
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// In-place forward elimination; returns the rank. Consumes the copy the
    /// public entry points make, inputs stay immutable.
    fn eliminate(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(rank, pivot);
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form together with the rank.
    pub fn rref(&self) -> (BitMatrix, usize) {
        let mut m = self.clone();
        let rank = m.eliminate();
        (m, rank)
    }
}

/// Rank of `m` over F2 (dimension of the row space).
pub fn rank_f2(m: &BitMatrix) -> usize {
    m.clone().eliminate()
}

/// True iff `m` has full row rank. Requires `rows <= cols`.
pub fn is_full_rank(m: &BitMatrix) -> Result<bool> {
    if m.rows() > m.cols() {
        return Err(Error::Shape(format!("rows {} > cols {}", m.rows(), m.cols())));
    }
    Ok(rank_f2(m) == m.rows())
}

/// Number of `r`-dimensional subspaces of F2^n, exactly.
///
/// Computed by the Pascal-type recurrence `[n r] = [n-1 r-1] + 2^r [n-1 r]`,
/// which stays in exact integers throughout.
pub fn gaussian_binomial(n: usize, r: usize) -> Result<BigCount> {
    if r > n {
        return Err(Error::Range(format!("r = {r} exceeds n = {n}")));
    }
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for _ in 1..=n {
        let mut next = vec![BigUint::one()];
        for k in 1..row.len() {
            let pow: BigUint = BigUint::one() << k;
            next.push(&row[k - 1] + pow * &row[k]);
        }
        next.push(BigUint::one());
        row = next;
    }
    Ok(row[r].clone())
}

/// Exact count of labeled `k`-vertex graphs by the F2 rank of their adjacency
/// matrix, from full enumeration of all `2^C(k,2)` graphs.
pub fn rank_census(k: usize) -> Result<BTreeMap<usize, u64>> {
    if k > RANK_CENSUS_MAX_K {
        return Err(Error::Budget(format!(
            "rank census enumerates 2^C(k,2) graphs; k = {k} exceeds cap {RANK_CENSUS_MAX_K}"
        )));
    }
    let edges = k * (k.saturating_sub(1)) / 2;
    let mut census = BTreeMap::new();
    for mask in 0u64..(1u64 << edges) {
        let m = adjacency_from_edge_mask(k, mask);
        *census.entry(rank_f2(&m)).or_insert(0u64) += 1;
    }
    Ok(census)
}

/// Adjacency matrix of the graph on `[k]` whose colex edge bitmask is `mask`.
pub fn adjacency_from_edge_mask(k: usize, mask: u64) -> BitMatrix {
    let mut m = BitMatrix::zero(k, k);
    let mut idx = 0;
    for j in 0..k {
        for i in 0..j {
            if (mask >> idx) & 1 == 1 {
                m.set(i, j, true);
                m.set(j, i, true);
            }
            idx += 1;
        }
    }
    m
}

/// Iterator over all subspaces of F2^n of dimension `r`, each yielded as its
/// unique RREF basis matrix. Used by the matroid enumeration oracles.
pub fn rref_bases(n: usize, r: usize) -> Vec<BitMatrix> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    collect_rrefs(n, r, 0, &mut pivots, &mut out);
    out
}

fn collect_rrefs(n: usize, r: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<BitMatrix>) {
    if pivots.len() == r {
        // Free entries sit at (row, col) with col > pivot(row), col not a pivot.
        let mut free = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for col in p + 1..n {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        assert!(free.len() < 40, "RREF enumeration would be astronomically large");
        for bits in 0u64..(1u64 << free.len()) {
            let mut m = BitMatrix::zero(r, n);
            for (row, &p) in pivots.iter().enumerate() {
                m.set(row, p, true);
            }
            for (b, &(row, col)) in free.iter().enumerate() {
                if (bits >> b) & 1 == 1 {
                    m.set(row, col, true);
                }
            }
            out.push(m);
        }
        return;
    }
    for p in start..n {
        pivots.push(p);
        collect_rrefs(n, r, p + 1, pivots, out);
        pivots.pop();
    }
}
