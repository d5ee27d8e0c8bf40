//! Algebraic and probabilistic graph algorithms over F2: local complementation
//! and pivot algebra, exact vertex-/pivot-minor decision, reordering of
//! complementation sequences, exact dyadic random-walk operators on graph
//! distributions, binary matroids via fundamental graphs, small vertex-minor
//! Ramsey numbers, and a seeded Monte-Carlo experiment harness.
//!
//! Everything is exact where exactness is possible (bit-parallel F2 kernels,
//! big-integer dyadic probabilities); Monte-Carlo paths are bit-reproducible
//! from a 64-bit seed.

pub mod bipartite;
pub mod canon;
pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod f2;
pub mod graph;
pub mod graph6;
pub mod matroid;
pub mod minor;
pub mod ramsey;
pub mod reorder;
pub mod rng;
pub mod stats;
pub mod walks;

pub use error::Error;

/// A vertex or ground-set label. Labels are stable small integers: deleting a
/// vertex never renumbers the others.
pub type Label = usize;

/// Colexicographic index of the unordered pair `{i, j}` with `i < j`:
/// `{0,1} -> 0, {0,2} -> 1, {1,2} -> 2, {0,3} -> 3, ...`
///
/// This is the single source of truth for edge-bitmask indexing shared by
/// graph readouts, walk distributions, and the graph6 codec.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Index of the bipartite cell `(l, r)` in a distribution over ordered
/// bipartite graphs with `left_size` left vertices: row-major by `r`.
#[inline]
pub fn bipartite_cell_index(l: usize, r: usize, left_size: usize) -> usize {
    r * left_size + l
}
