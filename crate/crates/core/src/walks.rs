//! Random-walk operators on distributions over labeled graphs, kept exact.
//!
//! A step of `Com` toggles a uniformly random clique `K_S`, a step of `Piv`
//! toggles the complete tripartite template `K^t_{S,T}`, and a step of `bPiv`
//! toggles a uniformly random biclique between the parts. All three are
//! convolutions on the group F2^(cells), so distributions are stored as exact
//! dyadic vectors: big-integer numerators over a shared power-of-two
//! denominator that grows by exactly `k`, `2k`, or `l+r` per step. The
//! characters `chi_G(H) = (-1)^(|E(G) cap E(H)|)` diagonalize every operator.
//!
//! Vector indexing: bit `pair_index(i, j)` for plain shapes, bit
//! `bipartite_cell_index(l, r, ...)` for bipartite shapes, shared with the
//! graph readout functions.

use crate::bipartite::OrderedBipartiteGraph;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::f2::{rank_f2, BitMatrix};
use crate::graph::Graph;
use crate::{bipartite_cell_index, pair_index};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Largest `k` for which plain-shape vectors are built (2^C(k,2) entries).
pub const MAX_PLAIN_K: usize = 6;
/// Largest `l*r` for which bipartite vectors are built (2^(l*r) entries).
pub const MAX_BIPARTITE_CELLS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Com,
    Piv,
    BPiv,
}

impl std::str::FromStr for WalkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "com" => Ok(WalkKind::Com),
            "piv" => Ok(WalkKind::Piv),
            "bpiv" => Ok(WalkKind::BPiv),
            _ => Err(Error::Parse(format!("unknown walk kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistShape {
    Plain { k: usize },
    Bipartite { l: usize, r: usize },
}

impl DistShape {
    pub fn cells(&self) -> usize {
        match *self {
            DistShape::Plain { k } => k * k.saturating_sub(1) / 2,
            DistShape::Bipartite { l, r } => l * r,
        }
    }

    fn check_budget(&self) -> Result<()> {
        match *self {
            DistShape::Plain { k } if k > MAX_PLAIN_K => Err(Error::Budget(format!(
                "plain walks enumerate 2^C(k,2) graphs; k = {k} exceeds {MAX_PLAIN_K}"
            ))),
            DistShape::Bipartite { l, r } if l * r > MAX_BIPARTITE_CELLS => {
                Err(Error::Budget(format!(
                    "bipartite walks enumerate 2^(l*r) graphs; {l}x{r} exceeds {MAX_BIPARTITE_CELLS} cells"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Denominator exponent added by one step of `kind`.
    fn step_exponent(&self, kind: WalkKind) -> Result<u32> {
        match (self, kind) {
            (DistShape::Plain { k }, WalkKind::Com) => Ok(*k as u32),
            (DistShape::Plain { k }, WalkKind::Piv) => Ok(2 * *k as u32),
            (DistShape::Bipartite { l, r }, WalkKind::BPiv) => Ok((*l + *r) as u32),
            _ => Err(Error::Precondition(format!("walk kind {kind:?} does not fit shape {self:?}"))),
        }
    }
}

/// Exact distribution over labeled graphs of one shape: numerator vector over
/// the shared denominator `2^denom_exp`, indexed by edge/cell bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDistribution {
    shape: DistShape,
    nums: Vec<BigInt>,
    denom_exp: u32,
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    shape: DistShape,
    denom_exp: u32,
    numerators: Vec<String>,
}

impl GraphDistribution {
    /// Point mass on the graph with the given bitmask.
    pub fn point_mass(shape: DistShape, mask: u64) -> Result<Self> {
        shape.check_budget()?;
        let size = 1usize << shape.cells();
        if mask as usize >= size {
            return Err(Error::Range(format!("mask {mask} outside 2^{}", shape.cells())));
        }
        let mut nums = vec![BigInt::zero(); size];
        nums[mask as usize] = BigInt::one();
        Ok(GraphDistribution { shape, nums, denom_exp: 0 })
    }

    /// Point mass on the edgeless graph (the walks' canonical start).
    pub fn point_mass_edgeless(shape: DistShape) -> Result<Self> {
        GraphDistribution::point_mass(shape, 0)
    }

    pub fn uniform(shape: DistShape) -> Result<Self> {
        shape.check_budget()?;
        let cells = shape.cells() as u32;
        let nums = vec![BigInt::one(); 1usize << cells];
        Ok(GraphDistribution { shape, nums, denom_exp: cells })
    }

    pub fn shape(&self) -> DistShape {
        self.shape
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    /// Probability of the graph with bitmask `mask`.
    pub fn mass(&self, mask: u64) -> Dyadic {
        Dyadic::new(self.nums[mask as usize].clone(), self.denom_exp)
    }

    /// Mass conservation and nonnegativity; exact.
    pub fn check_invariants(&self) -> bool {
        self.nums.iter().all(|n| !n.is_negative())
            && self.nums.iter().sum::<BigInt>() == BigInt::one() << self.denom_exp
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DistributionJson {
            shape: self.shape,
            denom_exp: self.denom_exp,
            numerators: self.nums.iter().map(|n| n.to_string()).collect(),
        })
        .expect("distribution serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let parsed: DistributionJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let nums: Vec<BigInt> = parsed
            .numerators
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if nums.len() != 1 << parsed.shape.cells() {
            return Err(Error::Parse("numerator vector length mismatch".into()));
        }
        Ok(GraphDistribution { shape: parsed.shape, nums, denom_exp: parsed.denom_exp })
    }
}

/// Clique edge bitmask of `K_S` for `S` given as a vertex bitmask on `[k]`.
pub fn clique_mask(s: u64) -> u64 {
    let mut mask = 0;
    let mut rest = s;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let mut lower = s & ((1 << j) - 1);
        while lower != 0 {
            let i = lower.trailing_zeros() as usize;
            lower &= lower - 1;
            mask |= 1 << pair_index(i, j);
        }
    }
    mask
}

/// Edge bitmask of the complete tripartite template on parts
/// `{S minus T, T minus S, S cap T}`.
pub fn tripartite_mask(s: u64, t: u64) -> u64 {
    let parts = [s & !t, t & !s, s & t];
    let mut mask = 0;
    for a in 0..3 {
        for b in a + 1..3 {
            let (mut pa, pb) = (parts[a], parts[b]);
            while pa != 0 {
                let i = pa.trailing_zeros() as usize;
                pa &= pa - 1;
                let mut q = pb;
                while q != 0 {
                    let j = q.trailing_zeros() as usize;
                    q &= q - 1;
                    mask |= 1 << pair_index(i.min(j), i.max(j));
                }
            }
        }
    }
    mask
}

/// Cell bitmask of the biclique `S x T` in an `l x r` bipartite shape.
pub fn biclique_mask(s: u64, t: u64, l: usize) -> u64 {
    let mut mask = 0;
    let mut tt = t;
    while tt != 0 {
        let j = tt.trailing_zeros() as usize;
        tt &= tt - 1;
        let mut ss = s;
        while ss != 0 {
            let i = ss.trailing_zeros() as usize;
            ss &= ss - 1;
            mask |= 1 << bipartite_cell_index(i, j, l);
        }
    }
    mask
}

/// Toggle templates of one step with multiplicities summing to 2^step_exp.
fn templates(shape: DistShape, kind: WalkKind) -> Result<Vec<(u64, u64)>> {
    shape.check_budget()?;
    shape.step_exponent(kind)?;
    let mut multiplicity: HashMap<u64, u64> = HashMap::new();
    match (shape, kind) {
        (DistShape::Plain { k }, WalkKind::Com) => {
            for s in 0u64..1 << k {
                *multiplicity.entry(clique_mask(s)).or_insert(0) += 1;
            }
        }
        (DistShape::Plain { k }, WalkKind::Piv) => {
            for s in 0u64..1 << k {
                for t in 0u64..1 << k {
                    *multiplicity.entry(tripartite_mask(s, t)).or_insert(0) += 1;
                }
            }
        }
        (DistShape::Bipartite { l, r }, WalkKind::BPiv) => {
            for s in 0u64..1 << l {
                for t in 0u64..1 << r {
                    *multiplicity.entry(biclique_mask(s, t, l)).or_insert(0) += 1;
                }
            }
        }
        _ => unreachable!("step_exponent already rejected the mismatch"),
    }
    let mut out: Vec<(u64, u64)> = multiplicity.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// One operator application on a raw signed vector; returns the convolved
/// vector and the denominator exponent the caller must add. This is the
/// shared path for distributions and for character eigenvector checks.
pub fn apply_operator_raw(
    shape: DistShape,
    kind: WalkKind,
    nums: &[BigInt],
) -> Result<(Vec<BigInt>, u32)> {
    if nums.len() != 1 << shape.cells() {
        return Err(Error::Range("vector length does not match shape".into()));
    }
    let temps = templates(shape, kind)?;
    let mut out = vec![BigInt::zero(); nums.len()];
    for (x, slot) in out.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for &(mask, mult) in &temps {
            acc += &nums[x ^ mask as usize] * mult;
        }
        *slot = acc;
    }
    Ok((out, shape.step_exponent(kind)?))
}

/// One exact walk step; mass is preserved exactly.
pub fn apply_walk_step(mu: &GraphDistribution, kind: WalkKind) -> Result<GraphDistribution> {
    let (nums, add) = apply_operator_raw(mu.shape, kind, &mu.nums)?;
    let out = GraphDistribution { shape: mu.shape, nums, denom_exp: mu.denom_exp + add };
    debug_assert!(out.check_invariants());
    Ok(out)
}

/// Applies a sequence of steps starting from `mu`.
pub fn apply_walk_steps(mu: &GraphDistribution, kinds: &[WalkKind]) -> Result<GraphDistribution> {
    let mut cur = mu.clone();
    for &k in kinds {
        cur = apply_walk_step(&cur, k)?;
    }
    Ok(cur)
}

/// The character vector `chi_G` over the shape, entries +-1.
pub fn chi_vector(shape: DistShape, g_mask: u64) -> Vec<BigInt> {
    (0..1u64 << shape.cells())
        .map(|h| {
            if (g_mask & h).count_ones() % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            }
        })
        .collect()
}

/// Eigenvalue of `chi_G` under the operator, by direct expectation over the
/// uniform template choice.
pub fn character_eigenvalue_mask(shape: DistShape, kind: WalkKind, g_mask: u64) -> Result<Dyadic> {
    let temps = templates(shape, kind)?;
    let mut acc = BigInt::zero();
    for &(mask, mult) in &temps {
        if (g_mask & mask).count_ones() % 2 == 0 {
            acc += mult;
        } else {
            acc -= mult;
        }
    }
    Ok(Dyadic::new(acc, shape.step_exponent(kind)?))
}

/// Eigenvalue of `chi_G` for a plain-shape graph, any live labels.
pub fn character_eigenvalue(g: &Graph, kind: WalkKind) -> Result<Dyadic> {
    let labels = g.live_labels();
    let shape = DistShape::Plain { k: labels.len() };
    character_eigenvalue_mask(shape, kind, g.induced_edge_mask(&labels))
}

/// Eigenvalue of `chi_G` under `bPiv` for an ordered bipartite graph.
pub fn character_eigenvalue_bipartite(b: &OrderedBipartiteGraph) -> Result<Dyadic> {
    let shape =
        DistShape::Bipartite { l: b.left_labels().len(), r: b.right_labels().len() };
    let mask = b.induced_cell_mask(b.left_labels(), b.right_labels());
    character_eigenvalue_mask(shape, WalkKind::BPiv, mask)
}

/// `2^-rank_F2(A)` for the adjacency (plain) or bipartite adjacency matrix;
/// the spectral form of the Piv and bPiv eigenvalues.
pub fn rank_eigenvalue_plain(k: usize, g_mask: u64) -> Dyadic {
    let m = crate::f2::adjacency_from_edge_mask(k, g_mask);
    Dyadic::power_of_two(rank_f2(&m) as u32)
}

pub fn rank_eigenvalue_bipartite(l: usize, r: usize, cell_mask: u64) -> Dyadic {
    let m = BitMatrix::from_fn(r, l, |i, j| cell_mask >> bipartite_cell_index(j, i, l) & 1 == 1);
    Dyadic::power_of_two(rank_f2(&m) as u32)
}

/// Exact `L_inf` distance from `mu` to the uniform distribution.
pub fn linf_distance_to_uniform(mu: &GraphDistribution) -> Dyadic {
    let unif = Dyadic::power_of_two(mu.shape.cells() as u32);
    let mut best = Dyadic::zero();
    for n in &mu.nums {
        let d = Dyadic::new(n.clone(), mu.denom_exp).sub(&unif).abs();
        if best.cmp_exact(&d) == std::cmp::Ordering::Less {
            best = d;
        }
    }
    best
}

/// The mixing bound `2^(2k - C(k,2) - m)` with `m = m1 + 2*m2`, as an exact
/// dyadic value (`m > 2k` makes the exponent negative at the scales used).
pub fn plain_mixing_bound(k: usize, m1: usize, m2: usize) -> Dyadic {
    let cells = (k * (k - 1) / 2) as i64;
    let e = 2 * k as i64 - cells - (m1 as i64 + 2 * m2 as i64);
    if e >= 0 {
        Dyadic::new(BigInt::one() << u32::try_from(e).unwrap(), 0)
    } else {
        Dyadic::power_of_two(u32::try_from(-e).unwrap())
    }
}
