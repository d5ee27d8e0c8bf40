//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line with its measured numbers. Everything that can be exact is
//! exact (big-integer dyadic comparisons); statistical criteria run on pinned
//! seeds with their tolerances spelled out inline.

use num_bigint::BigInt;
use num_traits::One;
use std::time::Instant;
use vmlab_core::dyadic::Dyadic;
use vmlab_core::experiments::{
    aggregate, run_experiment, symdiff_independence_chi, Aggregates, ExperimentConfig,
    ExperimentKind,
};
use vmlab_core::f2::{adjacency_from_edge_mask, rank_census, rank_f2};
use vmlab_core::graph::{apply_comps, Graph};
use vmlab_core::matroid::{align_partition, minor_closure_keys, BinaryMatroid, MinorOp};
use vmlab_core::minor::{
    graph_on_labels, is_k_vm_universal, is_vertex_minor, k_subsets, local_equivalence_orbit,
    pivot_minor_closure, reachable_targets, UniversalityOutcome,
};
use vmlab_core::ramsey::{extremal_partition_ok, maximum_independent_sets, vm_ramsey, wheel6};
use vmlab_core::reorder::{
    build_gadget, reorder_sequence, reorder_sequence_universal, verify_reordering,
};
use vmlab_core::rng::{trial_seed, CounterRng};
use vmlab_core::stats::{chi_square_quantile, wilson_interval, Z_95};
use vmlab_core::walks::{
    apply_operator_raw, apply_walk_step, character_eigenvalue_mask, chi_vector,
    linf_distance_to_uniform, plain_mixing_bound, rank_eigenvalue_plain, DistShape,
    GraphDistribution, WalkKind,
};
use vmlab_core::bipartite::OrderedBipartiteGraph;
use vmlab_core::Label;

const BUDGET: u64 = 1 << 30;

fn edge_cells(k: usize) -> usize {
    k * (k - 1) / 2
}

#[test]
fn criterion_01_spectral_identity() {
    let start = Instant::now();
    for k in [3usize, 4] {
        let shape = DistShape::Plain { k };
        for mask in 0u64..1 << edge_cells(k) {
            let chi = chi_vector(shape, mask);
            for kind in [WalkKind::Com, WalkKind::Piv] {
                let lambda = character_eigenvalue_mask(shape, kind, mask).unwrap();
                let (out, add) = apply_operator_raw(shape, kind, &chi).unwrap();
                assert_eq!(add, lambda.exp(), "denominators line up by construction");
                for (o, c) in out.iter().zip(&chi) {
                    assert_eq!(o, &(lambda.num() * c), "k={k} mask={mask} {kind:?}");
                }
            }
            // Piv eigenvalue is exactly 2^-rank of the adjacency matrix.
            let piv = character_eigenvalue_mask(shape, WalkKind::Piv, mask).unwrap();
            assert_eq!(
                piv.cmp_exact(&rank_eigenvalue_plain(k, mask)),
                std::cmp::Ordering::Equal,
                "k={k} mask={mask}"
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "runtime {secs:.1}s exceeds 10s");
    println!("criterion 01 PASS: Com/Piv act as exact eigenvalues on all chi_G, k=3,4 ({secs:.2}s)");
}

#[test]
fn criterion_02_eigenvalue_inequality() {
    for k in 1..=4usize {
        for mask in 0u64..1 << edge_cells(k) {
            let com = character_eigenvalue_mask(DistShape::Plain { k }, WalkKind::Com, mask).unwrap();
            let piv = character_eigenvalue_mask(DistShape::Plain { k }, WalkKind::Piv, mask).unwrap();
            // (com)^2 <= piv, both over denominator 2^(2k).
            let com_sq = com.num() * com.num();
            assert!(com_sq <= piv.num().clone(), "k={k} mask={mask}");
        }
    }
    println!("criterion 02 PASS: (lambda_Com)^2 <= lambda_Piv for all graphs on k <= 4");
}

#[test]
fn criterion_03_rank_census() {
    let start = Instant::now();
    for k in 0..=6usize {
        let census = rank_census(k).unwrap();
        let total: u64 = census.values().sum();
        assert_eq!(total, 1u64 << edge_cells(k));
        for (&r, &count) in &census {
            if r % 2 == 1 {
                assert_eq!(count, 0, "odd rank {r} at k={k}");
            } else if r >= 2 {
                let bound = 1u128 << (r * k - 2);
                assert!(u128::from(count) <= bound, "k={k} r={r}: {count} > {bound}");
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0);
    println!("criterion 03 PASS: odd ranks empty, even ranks within 2^(rk-2), k <= 6 ({secs:.2}s)");
}

#[test]
fn criterion_04_mixing_bounds() {
    // Plain shapes: every (m1, m2) recipe with m1 + 2 m2 in (2k, 2k+8].
    for k in [3usize, 4] {
        for m in 2 * k + 1..=2 * k + 8 {
            for m2 in 0..=m / 2 {
                let m1 = m - 2 * m2;
                let mut mu = GraphDistribution::point_mass_edgeless(DistShape::Plain { k }).unwrap();
                for _ in 0..m1 {
                    mu = apply_walk_step(&mu, WalkKind::Com).unwrap();
                }
                for _ in 0..m2 {
                    mu = apply_walk_step(&mu, WalkKind::Piv).unwrap();
                }
                let bound = plain_mixing_bound(k, m1, m2);
                let dist = linf_distance_to_uniform(&mu);
                assert!(dist.le(&bound), "k={k} m1={m1} m2={m2}: {dist} > {bound}");
                // Operator order does not matter: interleave and recheck.
                let mut nu = GraphDistribution::point_mass_edgeless(DistShape::Plain { k }).unwrap();
                let mut c = 0;
                let mut p = 0;
                while c < m1 || p < m2 {
                    if c < m1 {
                        nu = apply_walk_step(&nu, WalkKind::Com).unwrap();
                        c += 1;
                    }
                    if p < m2 {
                        nu = apply_walk_step(&nu, WalkKind::Piv).unwrap();
                        p += 1;
                    }
                }
                assert_eq!(
                    linf_distance_to_uniform(&nu).cmp_exact(&dist),
                    std::cmp::Ordering::Equal
                );
            }
        }
    }
    // Bipartite: deviation halves per step for every shape with l*r <= 12.
    for l in 1..=12usize {
        for r in l..=12usize {
            if l * r > 12 {
                continue;
            }
            let shape = DistShape::Bipartite { l, r };
            let mut mu = GraphDistribution::point_mass_edgeless(shape).unwrap();
            for t in 1..=12u32 {
                mu = apply_walk_step(&mu, WalkKind::BPiv).unwrap();
                let bound = Dyadic::power_of_two(t);
                assert!(
                    linf_distance_to_uniform(&mu).le(&bound),
                    "(l,r)=({l},{r}) t={t}"
                );
            }
        }
    }
    println!("criterion 04 PASS: exact mixing bounds for all recipes, k=3,4 and all l*r <= 12");
}

#[test]
fn criterion_05_minor_engine_equivalence() {
    let start = Instant::now();
    use rayon::prelude::*;
    for n in 1..=5usize {
        let cells = edge_cells(n);
        let labels: Vec<Label> = (0..n).collect();
        let disagreements: usize = (0u64..1 << cells)
            .into_par_iter()
            .map(|gmask| {
                let g = Graph::from_edge_mask(n, gmask);
                let orbit = local_equivalence_orbit(&g, 1 << 12).unwrap();
                let mut bad = 0;
                for size in 1..=n {
                    for u in k_subsets(&labels, size) {
                        let brute: std::collections::HashSet<u64> =
                            orbit.iter().map(|m| m.induced_edge_mask(&u)).collect();
                        // The set-valued form of the elimination recursion
                        // covers every H on U at once (|U| = n means no
                        // vertex is eliminated: orbit membership decides).
                        let sweep = (size < n).then(|| reachable_targets(&g, &u, BUDGET).unwrap());
                        for hmask in 0..1u64 << edge_cells(size) {
                            let expected = brute.contains(&hmask);
                            let by_recursion = match &sweep {
                                Some(s) => s.contains(hmask),
                                None => is_vertex_minor(&g, &graph_on_labels(&u, hmask), BUDGET)
                                    .unwrap()
                                    .is_some(),
                            };
                            if by_recursion != expected {
                                bad += 1;
                            }
                            // Tie in the witness-producing single-query
                            // engine on a deterministic subsample.
                            if size < n && (gmask + hmask) % 3 == 0 {
                                let h = graph_on_labels(&u, hmask);
                                let w = is_vertex_minor(&g, &h, BUDGET).unwrap();
                                if w.is_some() != expected {
                                    bad += 1;
                                }
                                if let Some(w) = w {
                                    assert_eq!(&w.replay(&g).unwrap(), &h);
                                }
                            }
                        }
                    }
                }
                bad
            })
            .sum();
        assert_eq!(disagreements, 0, "n = {n}");
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 300.0, "runtime {secs:.1}s exceeds 5 min");
    println!("criterion 05 PASS: recursion matches orbit brute force on all (G,H), n <= 5 ({secs:.1}s)");
}

#[test]
fn criterion_06_vm_ramsey_values() {
    let start = Instant::now();
    assert_eq!(vm_ramsey(1).unwrap().value, 1);
    assert_eq!(vm_ramsey(2).unwrap().value, 3);
    let r3 = vm_ramsey(3).unwrap();
    assert_eq!(r3.value, 7, "R_vm(3)");
    // The 6-wheel is certified as a counterexample class on 6 vertices.
    let wheel = wheel6();
    assert!(
        r3.counterexamples.iter().any(|g| vmlab_core::canon::isomorphic(g, &wheel)),
        "wheel not among counterexamples"
    );
    // Extremal structure of every counterexample: with U a maximum
    // independent set, V_empty is empty and |V_S| <= min(2, |S|).
    for g in &r3.counterexamples {
        for u in maximum_independent_sets(g) {
            assert!(extremal_partition_ok(g, &u), "graph {:?} U {u:?}", g.edges());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 600.0, "runtime {secs:.1}s exceeds 10 min");
    println!(
        "criterion 06 PASS: R_vm(1..3) = 1, 3, 7 with {} six-vertex counterexample classes incl. the wheel ({secs:.1}s)",
        r3.counterexamples.len()
    );
}

#[test]
fn criterion_07_matroid_bridge() {
    let start = Instant::now();
    use rayon::prelude::*;
    use std::collections::HashSet;
    // Every binary matroid on at most 6 elements arises as M(G) for an
    // ordered bipartite G; check the pivot-minor <-> matroid-minor
    // correspondence in both directions as closure equality, plus pivot
    // invariance and deletion/contraction commutation.
    let mut shapes = Vec::new();
    for l in 0..=6usize {
        for r in 0..=6usize {
            if l + r >= 1 && l + r <= 6 {
                shapes.push((l, r));
            }
        }
    }
    let disagreements: usize = shapes
        .par_iter()
        .map(|&(l, r)| {
            let mut bad = 0;
            for emask in 0u64..1 << (l * r) {
                let left: Vec<Label> = (0..l).collect();
                let right: Vec<Label> = (l..l + r).collect();
                let mut edges = Vec::new();
                for (j, &rv) in right.iter().enumerate() {
                    for (i, &lv) in left.iter().enumerate() {
                        if emask >> (j * l + i) & 1 == 1 {
                            edges.push((lv, rv));
                        }
                    }
                }
                let g = OrderedBipartiteGraph::new(&left, &right, &edges).unwrap();
                let m = BinaryMatroid::from_fundamental(&g);
                // Closure equality: matroids of pivot-minors = minors.
                let pm_keys: HashSet<_> = pivot_minor_closure(&g, 1 << 22)
                    .unwrap()
                    .iter()
                    .map(|h| BinaryMatroid::from_fundamental(h).independence_key().unwrap())
                    .collect();
                let minor_keys = minor_closure_keys(&m).unwrap();
                if pm_keys != minor_keys {
                    bad += 1;
                }
                // Pivot invariance M(G x uv) = M(G).
                for (u, v) in g.edges() {
                    let mp = BinaryMatroid::from_fundamental(&g.pivot(u, v).unwrap());
                    if !vmlab_core::matroid::matroid_eq(&m, &mp).unwrap() {
                        bad += 1;
                    }
                }
                // Deletion and contraction commute with vertex deletion.
                for &v in g.left_labels() {
                    let direct = BinaryMatroid::from_fundamental(&g.delete_vertex(v).unwrap());
                    let via = m.minor_op(v, MinorOp::Delete).unwrap();
                    if !vmlab_core::matroid::matroid_eq(&direct, &via).unwrap() {
                        bad += 1;
                    }
                }
                for &v in g.right_labels() {
                    let direct = BinaryMatroid::from_fundamental(&g.delete_vertex(v).unwrap());
                    let via = m.minor_op(v, MinorOp::Contract).unwrap();
                    if !vmlab_core::matroid::matroid_eq(&direct, &via).unwrap() {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum();
    assert_eq!(disagreements, 0);
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 600.0, "runtime {secs:.1}s exceeds 10 min");
    println!("criterion 07 PASS: pivot-minor/matroid-minor correspondence exact on all n <= 6 ({secs:.1}s)");
}

#[test]
fn criterion_08_basis_counts() {
    // Exact normalization at the pinned shapes.
    assert!(vmlab_core::experiments::normalization_identity_holds().unwrap());
    // Concentration at (r, n) = (5, 10), 10^4 samples.
    let config = ExperimentConfig {
        id: "acceptance-bases".into(),
        seed: 0xACCE55,
        output: None,
        kind: ExperimentKind::Matroid {
            conc_rank: 5,
            conc_ground: 10,
            conc_trials: 10_000,
            rank_ground: 12,
            rank_trials: 20_000,
        },
    };
    let record = run_experiment(&config).unwrap();
    let Aggregates::Matroid {
        normalization_exact,
        var_ratio,
        var_ratio_se,
        var_ratio_bound,
        rank_chi,
        rank_chi_critical,
        ..
    } = record.aggregates
    else {
        panic!()
    };
    assert!(normalization_exact);
    assert!(
        var_ratio <= var_ratio_bound + 3.0 * var_ratio_se,
        "Var/E^2 = {var_ratio} vs bound {var_ratio_bound} (se {var_ratio_se})"
    );
    assert!(rank_chi < rank_chi_critical, "rank chi {rank_chi} vs {rank_chi_critical}");
    println!(
        "criterion 08 PASS: normalization exact; Var/E^2 = {var_ratio:.4} <= {var_ratio_bound:.4} + 3se; rank chi {rank_chi:.2} < {rank_chi_critical:.2}"
    );
}

#[test]
fn criterion_09_second_moment() {
    let start = Instant::now();
    let config = ExperimentConfig {
        id: "acceptance-second-moment".into(),
        seed: 0x5EC0ED,
        output: None,
        kind: ExperimentKind::SecondMoment { n: 12, k: 3, trials: 1000, target_mask: 0 },
    };
    let record = run_experiment(&config).unwrap();
    let Aggregates::SecondMoment { mean_x, expected_x, mean_tolerance, bins, .. } =
        record.aggregates.clone()
    else {
        panic!()
    };
    assert_eq!(expected_x, 512.0);
    assert!(
        (mean_x - expected_x).abs() <= mean_tolerance,
        "mean {mean_x} vs 512 +- {mean_tolerance}"
    );
    for b in bins.iter().filter(|b| b.d > 6) {
        assert!(
            (b.p_hat - 0.125).abs() <= b.bound + 3.0 * b.sigma,
            "bin d={} p={} bound={} sigma={}",
            b.d,
            b.p_hat,
            b.bound,
            b.sigma
        );
    }
    // Aggregates reproduce from stored trials.
    assert_eq!(aggregate(&config, &record.trials).unwrap(), record.aggregates);
    // Independence spot check at (n,k) = (8,2).
    let (stat, crit) = symdiff_independence_chi(8, 2, 10_000, 0xD1CE).unwrap();
    assert!(stat < crit, "independence chi {stat} vs {crit}");
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 1800.0, "runtime {secs:.1}s exceeds 30 min");
    println!(
        "criterion 09 PASS: mean X = {mean_x:.1} within 3 sigma of 512; all bins d > 6 inside bound + 3 sigma ({secs:.1}s)"
    );
}

#[test]
fn criterion_10_universality_rates() {
    let start = Instant::now();
    // (a) 2-universality of G(12,1/2) at rate >= 0.95 over 200 trials.
    let config = ExperimentConfig {
        id: "acceptance-univ2".into(),
        seed: 0xBEEF,
        output: None,
        kind: ExperimentKind::Universality { n: 12, k: 2, trials: 200, budget: BUDGET },
    };
    let record = run_experiment(&config).unwrap();
    let Aggregates::Universality { rate, budget_exceeded, .. } = record.aggregates else {
        panic!()
    };
    assert_eq!(budget_exceeded, 0);
    assert!(rate >= 0.95, "2-universality rate {rate}");
    // (b) 3-universality trend across n in {10, 12, 14}, 50 trials each.
    let mut rates = Vec::new();
    let mut intervals = Vec::new();
    for (i, n) in [10usize, 12, 14].into_iter().enumerate() {
        let mut universal = 0u64;
        for t in 0..50u64 {
            let g = Graph::sample_uniform(n, trial_seed(0xCAFE + i as u64, t));
            match is_k_vm_universal(&g, 3, BUDGET).unwrap() {
                UniversalityOutcome::Universal => universal += 1,
                UniversalityOutcome::NotUniversal { .. } => {}
                UniversalityOutcome::BudgetExceeded => panic!("budget"),
            }
        }
        rates.push(universal as f64 / 50.0);
        intervals.push(wilson_interval(universal, 50, Z_95));
    }
    let strictly_increasing = rates[0] < rates[1] && rates[1] < rates[2];
    let overlapping = intervals[0].1 >= intervals[1].0 || intervals[1].1 >= intervals[2].0;
    let secs = start.elapsed().as_secs_f64();
    if strictly_increasing {
        println!(
            "criterion 10 PASS: 2-univ rate {rate:.3} >= 0.95; 3-univ rates {rates:?} strictly increasing ({secs:.1}s)"
        );
    } else if overlapping {
        println!(
            "criterion 10 PASS (trend inconclusive): 2-univ rate {rate:.3} >= 0.95; 3-univ rates {rates:?} with overlapping intervals {intervals:?} ({secs:.1}s)"
        );
    } else {
        panic!("3-universality rates {rates:?} decrease with disjoint intervals {intervals:?}");
    }
}

#[test]
fn criterion_11_reordering() {
    let start = Instant::now();
    let mut rng = CounterRng::new(0x0DDE5);
    for trial in 0..10_000u64 {
        let n = 6 + (rng.next_u64() % 7) as usize; // 6..=12
        let g = Graph::sample_uniform(n, trial_seed(0xAB1E, trial));
        let hsize = 1 + (rng.next_u64() % 4) as usize; // |Vhat| <= 4
        let vhat: Vec<Label> = (0..hsize).collect();
        let len = (rng.next_u64() % 7) as usize; // |seq| <= 6
        let seq: Vec<Label> =
            (0..len).map(|_| vhat[(rng.next_u64() % hsize as u64) as usize]).collect();
        let out = reorder_sequence(&g, &vhat, &seq).unwrap();
        verify_reordering(&g, &vhat, &seq, &out).unwrap();
    }
    // Gadget-derived sequences reproduce per-host results for |Vhat| <= 2
    // across 10^3 hosts sharing G[Vhat].
    let mut checked = 0u64;
    let mut round = 0u64;
    while checked < 1000 {
        round += 1;
        let h = 1 + (rng.next_u64() % 2) as usize;
        let cells = h * (h - 1) / 2;
        let ghat_mask = rng.next_u64() & ((1u64 << cells) - 1);
        let ghat = Graph::from_edge_mask(h, ghat_mask);
        let len = (rng.next_u64() % 7) as usize;
        let seq: Vec<Label> = (0..len).map(|_| (rng.next_u64() % h as u64) as usize).collect();
        let universal = reorder_sequence_universal(&ghat, &seq).unwrap();
        for hseed in 0..10u64 {
            let mut host = Graph::sample_uniform(9, trial_seed(0x6AD6E7 + round, hseed));
            for b in 0..h {
                for a in 0..b {
                    let want = ghat_mask >> vmlab_core::pair_index(a, b) & 1 == 1;
                    if host.has_edge(a, b) != want {
                        host.toggle_edge(a, b);
                    }
                }
            }
            let vhat: Vec<Label> = (0..h).collect();
            verify_reordering(&host, &vhat, &seq, &universal).unwrap();
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("criterion 11 PASS: 10^4 reorderings verified by replay; gadget sequences match per-host on 10^3 hosts ({secs:.1}s)");
}

#[test]
fn criterion_12_align_partition() {
    let start = Instant::now();
    // Shape: L = scratch 0..9 + extras {10, 11}; R = scratch 12..21 +
    // target {22} + extra {23}. |Y1| = 1 against m = 10 scratch vertices:
    // failure means Bin(10, 1/2) = 0, probability 2^-10.
    let l: Vec<Label> = (0..12).collect();
    let r: Vec<Label> = (12..24).collect();
    let v1s: Vec<Label> = (0..10).collect();
    let v2s: Vec<Label> = (12..22).collect();
    let y1 = vec![22usize];
    let trials = 100_000u64;
    let mut failures = 0u64;
    let mut cell_ones = [0u64; 3];
    let mut successes = 0u64;
    for t in 0..trials {
        let seed = trial_seed(0xA716, t);
        let mut rng = CounterRng::new(seed);
        let mut edges = Vec::new();
        for &rv in &r {
            for &lv in &l {
                if rng.next_bit() {
                    edges.push((lv, rv));
                }
            }
        }
        let b = OrderedBipartiteGraph::new(&l, &r, &edges).unwrap();
        match align_partition(&b, &v1s, &v2s, &y1, &[]).unwrap() {
            None => failures += 1,
            Some(g) => {
                successes += 1;
                assert!(g.is_left(22));
                // Uniformity of the surviving unexposed cells (L' x R').
                let live_l = [10usize, 11, 22];
                for (i, &lv) in live_l.iter().enumerate() {
                    if g.has_edge(lv, 23) {
                        cell_ones[i] += 1;
                    }
                }
            }
        }
    }
    let p = 2f64.powi(-10);
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    let expected = trials as f64 * p;
    assert!(
        (failures as f64 - expected).abs() <= 3.0 * sigma,
        "failures {failures} vs {expected} +- {:.1}",
        3.0 * sigma
    );
    let mut chi = 0.0;
    for ones in cell_ones {
        let e = successes as f64 / 2.0;
        let d = ones as f64 - e;
        chi += d * d / (successes as f64 / 4.0);
    }
    let crit = chi_square_quantile(0.99, 3);
    assert!(chi < crit, "edge uniformity chi {chi} vs {crit}");
    let secs = start.elapsed().as_secs_f64();
    println!(
        "criterion 12 PASS: failure rate {failures}/{trials} within 3 sigma of 2^-10; edge uniformity chi {chi:.2} < {crit:.2} ({secs:.1}s)"
    );
}

/// Shared sanity: the dyadic machinery used above composes as expected.
#[test]
fn acceptance_support_exactness() {
    // A quick guard that exact comparisons in the criteria are meaningful:
    // 3/8 equals 6/16 exactly and differs from 5/16.
    let a = Dyadic::new(BigInt::from(3), 3);
    let b = Dyadic::new(BigInt::from(6), 4);
    assert_eq!(a.cmp_exact(&b), std::cmp::Ordering::Equal);
    assert!(Dyadic::new(BigInt::from(5), 4) < a);
    // Rank helper agrees with the adjacency route on a spot value.
    let m = adjacency_from_edge_mask(4, 0b111);
    assert_eq!(rank_f2(&m), 2);
    let _ = BigInt::one();
    let _ = apply_comps(&Graph::edgeless(2), &[0]).unwrap();
    let _ = build_gadget(&Graph::edgeless(1)).unwrap();
}
