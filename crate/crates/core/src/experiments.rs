//! Reproducible experiment harness: seeded Monte-Carlo campaigns with JSON
//! records and flat CSV per-trial rows.
//!
//! A config fully determines a run: per-trial seeds are derived from the
//! master seed by the documented counter scheme in [`crate::rng`], trials are
//! independent, and aggregation is an order-independent fold, so `--jobs`
//! only changes wall time. Aggregates are recomputable from the stored
//! per-trial outcomes.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::{
    count_bases, enumerate_matroids, rank_distribution_uniform_matroid, sample_uniform_matroid,
    sample_uniform_matroid_any_rank,
};
use crate::minor::{is_k_vm_universal, UniversalityOutcome};
use crate::rng::trial_seed;
use crate::stats::{
    binomial, chi_square_quantile, chi_square_statistic, mean_variance, wilson_interval, Z_95,
};
use crate::Label;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Density constant of the universality threshold for plain graphs,
/// `1 / (2 log2(4/3))`, computed from the closed form.
pub fn vm_universality_density() -> f64 {
    1.0 / (2.0 * (4.0f64 / 3.0).log2())
}

/// Density constant of the random lower bound, `1 / (2 log2 3)`.
pub fn vm_lower_density() -> f64 {
    1.0 / (2.0 * 3.0f64.log2())
}

/// Density constant for pivot-minor universality, `2 / log2(16/13)`.
pub fn pm_universality_density() -> f64 {
    2.0 / (16.0f64 / 13.0).log2()
}

/// Density constant for matroid universality, `1/(2 log2(8/7)) + 1/4`.
pub fn matroid_universality_density() -> f64 {
    1.0 / (2.0 * (8.0f64 / 7.0).log2()) + 0.25
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub seed: u64,
    /// Output path prefix for the JSON record and CSV rows.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(flatten)]
    pub kind: ExperimentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Fraction of `G(n,1/2)` samples that are `k`-vertex-minor universal.
    Universality { n: usize, k: usize, trials: u64, budget: u64 },
    /// Exact `X = #{J : G_J[U] = H}` statistics with correlation bins.
    SecondMoment {
        n: usize,
        k: usize,
        trials: u64,
        /// Colex edge mask of the fixed target `H` on `U`.
        target_mask: u64,
    },
    /// Matroid campaign: exact normalization identity, basis-count
    /// concentration, and the rank-distribution fit.
    Matroid {
        conc_rank: usize,
        conc_ground: usize,
        conc_trials: u64,
        rank_ground: usize,
        rank_trials: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TrialOutcome {
    Universality {
        universal: bool,
        budget_exceeded: bool,
        failing_u: Option<Vec<Label>>,
        failing_h_mask: Option<u64>,
    },
    SecondMoment {
        x: u64,
        /// `bin_matches[d]` counts ordered pairs `(J, J')` with
        /// `|J sym J'| = d` whose readouts agree (present for `n <= 12`).
        bin_matches: Vec<u64>,
    },
    MatroidBases {
        bases: u64,
    },
    MatroidRank {
        rank: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinStat {
    pub d: usize,
    pub pairs: u64,
    pub p_hat: f64,
    /// `2^(2k - C(k,2) - d)`, the correlation bound for this bin.
    pub bound: f64,
    /// Standard error of `p_hat` across trial graphs.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "aggregate", rename_all = "snake_case")]
pub enum Aggregates {
    Universality {
        trials: u64,
        universal: u64,
        budget_exceeded: u64,
        /// Fraction universal among decided trials.
        rate: f64,
        wilson_low: f64,
        wilson_high: f64,
    },
    SecondMoment {
        trials: u64,
        mean_x: f64,
        var_x: f64,
        expected_x: f64,
        /// 3 sigma allowance on the mean.
        mean_tolerance: f64,
        bins: Vec<BinStat>,
    },
    Matroid {
        /// Exact check of `sum b(M) = C(n,r) 2^(r(n-r))` at the three pinned
        /// shapes.
        normalization_exact: bool,
        conc_trials: u64,
        var_ratio: f64,
        var_ratio_se: f64,
        var_ratio_bound: f64,
        rank_chi: f64,
        rank_chi_critical: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialOutcome>,
    pub aggregates: Aggregates,
    pub wall_ms: u128,
}

impl ResultRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Flat CSV of the per-trial rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.config.kind {
            ExperimentKind::Universality { .. } => {
                out.push_str("trial,seed,universal,budget_exceeded,failing_u,failing_h_mask\n");
                for (t, row) in self.trials.iter().enumerate() {
                    let TrialOutcome::Universality {
                        universal,
                        budget_exceeded,
                        failing_u,
                        failing_h_mask,
                    } = row
                    else {
                        unreachable!()
                    };
                    let fu = failing_u
                        .as_ref()
                        .map(|u| {
                            u.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                        })
                        .unwrap_or_default();
                    let fh = failing_h_mask.map(|m| m.to_string()).unwrap_or_default();
                    out.push_str(&format!(
                        "{t},{},{universal},{budget_exceeded},{fu},{fh}\n",
                        trial_seed(self.config.seed, t as u64)
                    ));
                }
            }
            ExperimentKind::SecondMoment { .. } => {
                out.push_str("trial,seed,x,bin_matches\n");
                for (t, row) in self.trials.iter().enumerate() {
                    let TrialOutcome::SecondMoment { x, bin_matches } = row else {
                        unreachable!()
                    };
                    let bins = bin_matches
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    out.push_str(&format!(
                        "{t},{},{x},{bins}\n",
                        trial_seed(self.config.seed, t as u64)
                    ));
                }
            }
            ExperimentKind::Matroid { .. } => {
                out.push_str("trial,seed,kind,value\n");
                for (t, row) in self.trials.iter().enumerate() {
                    let (kind, value) = match row {
                        TrialOutcome::MatroidBases { bases } => ("bases", *bases as usize),
                        TrialOutcome::MatroidRank { rank } => ("rank", *rank),
                        _ => unreachable!(),
                    };
                    out.push_str(&format!(
                        "{t},{},{kind},{value}\n",
                        trial_seed(self.config.seed, t as u64)
                    ));
                }
            }
        }
        out
    }
}

/// Runs a config to a full record. Deterministic up to `wall_ms`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultRecord> {
    let start = std::time::Instant::now();
    let trials = match config.kind {
        ExperimentKind::Universality { n, k, trials, budget } => {
            run_universality_trials(n, k, trials, budget, config.seed)?
        }
        ExperimentKind::SecondMoment { n, k, trials, target_mask } => {
            run_second_moment_trials(n, k, trials, target_mask, config.seed)?
        }
        ExperimentKind::Matroid { conc_rank, conc_ground, conc_trials, rank_ground, rank_trials } => {
            run_matroid_trials(conc_rank, conc_ground, conc_trials, rank_ground, rank_trials, config.seed)?
        }
    };
    let aggregates = aggregate(config, &trials)?;
    Ok(ResultRecord {
        config: config.clone(),
        trials,
        aggregates,
        wall_ms: start.elapsed().as_millis(),
    })
}

fn run_universality_trials(
    n: usize,
    k: usize,
    trials: u64,
    budget: u64,
    seed: u64,
) -> Result<Vec<TrialOutcome>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = Graph::sample_uniform(n, trial_seed(seed, t));
            Ok(match is_k_vm_universal(&g, k, budget)? {
                UniversalityOutcome::Universal => TrialOutcome::Universality {
                    universal: true,
                    budget_exceeded: false,
                    failing_u: None,
                    failing_h_mask: None,
                },
                UniversalityOutcome::NotUniversal { u, h } => {
                    let mask = h.induced_edge_mask(&h.live_labels());
                    TrialOutcome::Universality {
                        universal: false,
                        budget_exceeded: false,
                        failing_u: Some(u),
                        failing_h_mask: Some(mask),
                    }
                }
                UniversalityOutcome::BudgetExceeded => TrialOutcome::Universality {
                    universal: false,
                    budget_exceeded: true,
                    failing_u: None,
                    failing_h_mask: None,
                },
            })
        })
        .collect()
}

/// Largest `n` for exact readout tables (`2^n` subsets per sampled graph).
pub const SECOND_MOMENT_MAX_N: usize = 18;
/// Largest `n` for all-pairs correlation bins (`4^n` comparisons per graph).
pub const SECOND_MOMENT_BIN_MAX_N: usize = 12;

/// Readout table: colex mask of `G_J[U]` for every `J`, built by sharing
/// complementation prefixes over the inclusion tree (indices in increasing
/// order, matching the `G_J` definition).
fn readout_table(g: &Graph, base: &[Label], u: &[Label]) -> Vec<u8> {
    let n = base.len();
    let mut table = vec![0u8; 1 << n];
    fn rec(g: &Graph, base: &[Label], u: &[Label], idx: usize, j_mask: usize, table: &mut Vec<u8>) {
        if idx == base.len() {
            table[j_mask] = g.induced_edge_mask(u) as u8;
            return;
        }
        rec(g, base, u, idx + 1, j_mask, table);
        let inc = g.local_complement(base[idx]).expect("live");
        rec(&inc, base, u, idx + 1, j_mask | (1 << idx), table);
    }
    rec(g, base, u, 0, 0, &mut table);
    table
}

fn run_second_moment_trials(
    n: usize,
    k: usize,
    trials: u64,
    target_mask: u64,
    seed: u64,
) -> Result<Vec<TrialOutcome>> {
    if n > SECOND_MOMENT_MAX_N {
        return Err(Error::Budget(format!(
            "second-moment readout enumerates 2^n subsets; n = {n} exceeds {SECOND_MOMENT_MAX_N}"
        )));
    }
    let cells = k * k.saturating_sub(1) / 2;
    if cells > 8 {
        return Err(Error::Budget("readout masks are stored as u8; k <= 4".into()));
    }
    if target_mask >= 1 << cells {
        return Err(Error::Range("target mask exceeds 2^C(k,2)".into()));
    }
    let base: Vec<Label> = (0..n).collect();
    let u: Vec<Label> = (n..n + k).collect();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = Graph::sample_uniform(n + k, trial_seed(seed, t));
            let table = readout_table(&g, &base, &u);
            let x = table.iter().filter(|&&m| u64::from(m) == target_mask).count() as u64;
            let mut bin_matches = Vec::new();
            if n <= SECOND_MOMENT_BIN_MAX_N {
                bin_matches = vec![0u64; n + 1];
                for d_mask in 1usize..1 << n {
                    let d = d_mask.count_ones() as usize;
                    let mut hits = 0u64;
                    for (j, &r) in table.iter().enumerate() {
                        hits += u64::from(r == table[j ^ d_mask]);
                    }
                    bin_matches[d] += hits;
                }
            }
            Ok(TrialOutcome::SecondMoment { x, bin_matches })
        })
        .collect()
}

fn run_matroid_trials(
    conc_rank: usize,
    conc_ground: usize,
    conc_trials: u64,
    rank_ground: usize,
    rank_trials: u64,
    seed: u64,
) -> Result<Vec<TrialOutcome>> {
    let mut out: Vec<TrialOutcome> = (0..conc_trials)
        .into_par_iter()
        .map(|t| {
            let m = sample_uniform_matroid(conc_rank, conc_ground, trial_seed(seed, t))?;
            let bases = count_bases(&m)?.to_u64().expect("desk-scale basis counts fit u64");
            Ok(TrialOutcome::MatroidBases { bases })
        })
        .collect::<Result<_>>()?;
    let ranks: Vec<TrialOutcome> = (0..rank_trials)
        .into_par_iter()
        .map(|t| {
            let m = sample_uniform_matroid_any_rank(rank_ground, trial_seed(seed, conc_trials + t))?;
            Ok(TrialOutcome::MatroidRank { rank: m.rank() })
        })
        .collect::<Result<_>>()?;
    out.extend(ranks);
    Ok(out)
}

/// Rebuilds aggregates from per-trial outcomes; `run_experiment` uses this
/// same fold, so stored aggregates are reproducible from stored trials.
pub fn aggregate(config: &ExperimentConfig, trials: &[TrialOutcome]) -> Result<Aggregates> {
    match config.kind {
        ExperimentKind::Universality { .. } => {
            let mut universal = 0u64;
            let mut budget = 0u64;
            for t in trials {
                let TrialOutcome::Universality { universal: u, budget_exceeded, .. } = t else {
                    unreachable!()
                };
                universal += u64::from(*u);
                budget += u64::from(*budget_exceeded);
            }
            let decided = trials.len() as u64 - budget;
            let rate = if decided == 0 { 0.0 } else { universal as f64 / decided as f64 };
            let (lo, hi) = wilson_interval(universal, decided, Z_95);
            Ok(Aggregates::Universality {
                trials: trials.len() as u64,
                universal,
                budget_exceeded: budget,
                rate,
                wilson_low: lo,
                wilson_high: hi,
            })
        }
        ExperimentKind::SecondMoment { n, k, .. } => {
            let cells = (k * k.saturating_sub(1) / 2) as i32;
            let xs: Vec<f64> = trials
                .iter()
                .map(|t| {
                    let TrialOutcome::SecondMoment { x, .. } = t else { unreachable!() };
                    *x as f64
                })
                .collect();
            let (mean_x, var_x) = mean_variance(&xs);
            let expected_x = 2f64.powi(n as i32 - cells);
            let mean_tolerance = 3.0 * (var_x / xs.len() as f64).sqrt();
            let mut bins = Vec::new();
            let have_bins = trials
                .iter()
                .all(|t| matches!(t, TrialOutcome::SecondMoment { bin_matches, .. } if !bin_matches.is_empty()));
            if have_bins && !trials.is_empty() {
                for d in 1..=n {
                    let pairs_per_graph = (binomial(n, d) as f64) * 2f64.powi(n as i32);
                    let per_graph: Vec<f64> = trials
                        .iter()
                        .map(|t| {
                            let TrialOutcome::SecondMoment { bin_matches, .. } = t else {
                                unreachable!()
                            };
                            bin_matches[d] as f64 / pairs_per_graph
                        })
                        .collect();
                    let (p_hat, var_p) = mean_variance(&per_graph);
                    bins.push(BinStat {
                        d,
                        pairs: (pairs_per_graph as u64) * trials.len() as u64,
                        p_hat,
                        bound: 2f64.powi(2 * k as i32 - cells - d as i32),
                        sigma: (var_p / per_graph.len() as f64).sqrt(),
                    });
                }
            }
            Ok(Aggregates::SecondMoment {
                trials: trials.len() as u64,
                mean_x,
                var_x,
                expected_x,
                mean_tolerance,
                bins,
            })
        }
        ExperimentKind::Matroid { conc_rank, conc_ground, conc_trials, rank_ground, .. } => {
            let normalization_exact = normalization_identity_holds()?;
            let bases: Vec<f64> = trials
                .iter()
                .take(conc_trials as usize)
                .map(|t| {
                    let TrialOutcome::MatroidBases { bases } = t else { unreachable!() };
                    *bases as f64
                })
                .collect();
            let (var_ratio, var_ratio_se) = bases_var_ratio_jackknife(&bases);
            let var_ratio_bound = 4.0
                * ((conc_ground + conc_rank) as f64 / (2.0 * conc_ground as f64))
                    .powi(conc_rank as i32);
            let ranks: Vec<usize> = trials
                .iter()
                .skip(conc_trials as usize)
                .map(|t| {
                    let TrialOutcome::MatroidRank { rank } = t else { unreachable!() };
                    *rank
                })
                .collect();
            let (rank_chi, rank_chi_critical) = rank_chi_square(rank_ground, &ranks)?;
            Ok(Aggregates::Matroid {
                normalization_exact,
                conc_trials,
                var_ratio,
                var_ratio_se,
                var_ratio_bound,
                rank_chi,
                rank_chi_critical,
            })
        }
    }
}

/// `Var[b]/E[b]^2` with a jackknife standard error.
fn bases_var_ratio_jackknife(bases: &[f64]) -> (f64, f64) {
    let t = bases.len() as f64;
    if bases.len() < 3 {
        return (0.0, 0.0);
    }
    let s1: f64 = bases.iter().sum();
    let s2: f64 = bases.iter().map(|b| b * b).sum();
    let ratio = |sum: f64, sumsq: f64, n: f64| {
        let m1 = sum / n;
        let m2 = sumsq / n;
        m2 / (m1 * m1) - 1.0
    };
    let full = ratio(s1, s2, t);
    let leave: Vec<f64> =
        bases.iter().map(|b| ratio(s1 - b, s2 - b * b, t - 1.0)).collect();
    let mean_leave = leave.iter().sum::<f64>() / t;
    let se = ((t - 1.0) / t * leave.iter().map(|v| (v - mean_leave).powi(2)).sum::<f64>()).sqrt();
    (full, se)
}

/// Exact normalization identity `sum b(M) = C(n,r) 2^(r(n-r))` at the three
/// pinned shapes.
pub fn normalization_identity_holds() -> Result<bool> {
    use num_bigint::BigUint;
    for (n, r) in [(3usize, 1usize), (3, 2), (4, 2)] {
        let total: BigUint = enumerate_matroids(r, n)?
            .iter()
            .map(|m| count_bases(m).expect("small"))
            .sum();
        let expect = BigUint::from(binomial(n, r)) << (r * (n - r));
        if total != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chi-square of an observed rank histogram against the exact subspace
/// weights; low-expectation tail cells are merged inward until every cell
/// expects at least five observations. Returns `(statistic, 0.99 quantile)`.
pub fn rank_chi_square(n: usize, ranks: &[usize]) -> Result<(f64, f64)> {
    let (weights, total) = rank_distribution_uniform_matroid(n)?;
    let total_f = total.to_f64().expect("finite");
    let probs: Vec<f64> =
        weights.iter().map(|w| w.to_f64().expect("finite") / total_f).collect();
    let trials = ranks.len() as f64;
    let mut observed = vec![0u64; n + 1];
    for &r in ranks {
        observed[r] += 1;
    }
    // Merge cells from both ends until expectations reach 5.
    let mut cells: Vec<(u64, f64)> =
        observed.iter().zip(&probs).map(|(&o, &p)| (o, p * trials)).collect();
    loop {
        if cells.len() <= 1 {
            break;
        }
        if cells[0].1 < 5.0 {
            let (o, e) = cells.remove(0);
            cells[0].0 += o;
            cells[0].1 += e;
            continue;
        }
        let last = cells.len() - 1;
        if cells[last].1 < 5.0 {
            let (o, e) = cells.remove(last);
            let last = cells.len() - 1;
            cells[last].0 += o;
            cells[last].1 += e;
            continue;
        }
        break;
    }
    let obs: Vec<u64> = cells.iter().map(|c| c.0).collect();
    let exp: Vec<f64> = cells.iter().map(|c| c.1).collect();
    let stat = chi_square_statistic(&obs, &exp);
    let crit = chi_square_quantile(0.99, (cells.len() - 1).max(1));
    Ok((stat, crit))
}

/// Contingency chi-square of the joint `(G_J[U], (G_J sym G_J')[U])` for
/// `J = {}`, `J' = [n]`, over seeded samples. Returns `(statistic, 0.99
/// quantile)`; the independence claim passes when `stat < quantile`.
pub fn symdiff_independence_chi(n: usize, k: usize, trials: u64, seed: u64) -> Result<(f64, f64)> {
    let cells = k * k.saturating_sub(1) / 2;
    if cells > 3 {
        return Err(Error::Budget("contingency table wants C(k,2) <= 3".into()));
    }
    let base: Vec<Label> = (0..n).collect();
    let u: Vec<Label> = (n..n + k).collect();
    let side = 1usize << cells;
    let mut counts = vec![0u64; side * side];
    for t in 0..trials {
        let g = Graph::sample_uniform(n + k, trial_seed(seed, t));
        let a = g.induced_edge_mask(&u) as usize;
        let gj = crate::graph::apply_comps(&g, &base)?;
        let b = (gj.induced_edge_mask(&u) as usize) ^ a;
        counts[a * side + b] += 1;
    }
    let row: Vec<u64> = (0..side).map(|i| (0..side).map(|j| counts[i * side + j]).sum()).collect();
    let col: Vec<u64> = (0..side).map(|j| (0..side).map(|i| counts[i * side + j]).sum()).collect();
    let total = trials as f64;
    let mut stat = 0.0;
    for i in 0..side {
        for j in 0..side {
            let e = row[i] as f64 * col[j] as f64 / total;
            if e > 0.0 {
                let d = counts[i * side + j] as f64 - e;
                stat += d * d / e;
            }
        }
    }
    let dof = (side - 1) * (side - 1);
    Ok((stat, chi_square_quantile(0.99, dof.max(1))))
}

/// Writes the JSON record and CSV rows next to `path_prefix`.
pub fn write_outputs(record: &ResultRecord, path_prefix: &std::path::Path) -> std::io::Result<()> {
    if let Some(dir) = path_prefix.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path_prefix.with_extension("json"), record.to_json())?;
    std::fs::write(path_prefix.with_extension("csv"), record.to_csv())
}
