use std::collections::BTreeSet;

use dpar::graph::{compact_subgraph, induced_subgraph, sort_edges_to_csr, Graph};
use dpar::loss::{iterative_loss_bound, LossSchedule};
use dpar::numtheory::NumberTheoryTables;
use dpar::scan::{prefix_sum, radix_sort_small_keys, radix_sort_u64, small_key_limit};
use dpar::{par, WorkCounter};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edge_set(g: &Graph) -> BTreeSet<(u32, u32)> {
    g.edges().into_iter().map(|(a, b, _)| (a, b)).collect()
}

fn random_edges(n: u32, m: usize, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| loop {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                break (a, b);
            }
        })
        .collect()
}

#[test]
fn prefix_sum_examples() {
    assert_eq!(prefix_sum(&[3, 1, 4, 1, 5]).unwrap(), vec![3, 4, 8, 9, 14]);
    assert!(prefix_sum(&[]).unwrap().is_empty());
    assert!(prefix_sum(&[u64::MAX, 1]).is_err());
    let v: Vec<u64> = (0..100_000).map(|i| i % 7).collect();
    let mut acc = 0;
    let oracle: Vec<u64> = v.iter().map(|&x| {
        acc += x;
        acc
    }).collect();
    assert_eq!(prefix_sum(&v).unwrap(), oracle);
}

#[test]
fn small_key_sort_matches_stable_sort() {
    let n = 1u64 << 20;
    let limit = small_key_limit(n);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let keys: Vec<u32> = (0..10_000).map(|_| rng.gen_range(1..=limit)).collect();
    let payloads: Vec<u32> = (0..10_000).collect();
    let got = radix_sort_small_keys(&keys, &payloads, n, &WorkCounter::new()).unwrap();
    let mut oracle: Vec<(u32, u32)> = keys.iter().copied().zip(payloads).collect();
    oracle.sort_by_key(|p| p.0);
    assert_eq!(got, oracle);
    assert!(radix_sort_small_keys(&[limit + 1], &[0u32], n, &WorkCounter::new()).is_err());
    assert!(radix_sort_small_keys(&[0], &[0u32], n, &WorkCounter::new()).is_err());
}

#[test]
fn single_edge_csr() {
    let g = sort_edges_to_csr(&[(0, 1)], 2, &WorkCounter::new()).unwrap();
    assert_eq!(g.offsets(), &[0, 1, 2]);
    assert_eq!(g.adjacency(), &[1, 0]);
}

#[test]
fn csr_errors() {
    let w = WorkCounter::new();
    assert!(sort_edges_to_csr(&[(0, 0)], 2, &w).is_err());
    assert!(sort_edges_to_csr(&[(0, 2)], 2, &w).is_err());
}

#[test]
fn triangle_any_order() {
    let w = WorkCounter::new();
    let base = sort_edges_to_csr(&[(0, 1), (1, 2), (2, 0)], 3, &w).unwrap();
    for order in [[(2, 1), (0, 2), (1, 0)], [(1, 2), (2, 0), (0, 1)], [(0, 2), (0, 1), (2, 1)]] {
        assert_eq!(sort_edges_to_csr(&order, 3, &w).unwrap(), base);
    }
}

#[test]
fn large_csr_roundtrip() {
    let edges = random_edges(5000, 100_000, 2);
    let g = sort_edges_to_csr(&edges, 5000, &WorkCounter::new()).unwrap();
    let oracle: BTreeSet<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    assert_eq!(edge_set(&g), oracle);
    assert_eq!(g.adjacency().len(), 2 * oracle.len());
    for v in 0..g.node_count() {
        assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn compaction_identity_and_path() {
    let w = WorkCounter::new();
    let g = Graph::from_edges(5, &random_edges(5, 8, 3)).unwrap();
    let (h, fwd, back) = compact_subgraph(&g, &[true; 5], &vec![true; g.adjacency().len()], &w).unwrap();
    assert_eq!(h, g);
    assert_eq!(back, vec![0, 1, 2, 3, 4]);
    assert!(fwd.iter().enumerate().all(|(i, &x)| x == Some(i as u32)));

    let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let keep_edge: Vec<bool> = (0..4).map(|i| path.owner_of(i) != 2 && path.adjacency()[i] != 2).collect();
    let (h, fwd, back) = compact_subgraph(&path, &[true, true, false], &keep_edge, &w).unwrap();
    assert_eq!(edge_set(&h), BTreeSet::from([(0, 1)]));
    assert_eq!(fwd, vec![Some(0), Some(1), None]);
    assert_eq!(back, vec![0, 1]);

    // A kept edge with a dropped endpoint.
    assert!(compact_subgraph(&path, &[true, true, false], &[true; 4], &w).is_err());
}

#[test]
fn prime_tables() {
    let t = NumberTheoryTables::new(10);
    assert_eq!(t.primes(), &[2, 3, 5, 7]);
    let f = t.field(7).unwrap();
    let residues: Vec<u64> = f.residues().map(|r| r.0).collect();
    assert_eq!(residues, vec![0, 1, 2, 4]);
    assert_eq!(f.sqrt(2), Some(3));
    assert_eq!(f.sqrt(3), None);
    let big = NumberTheoryTables::new(10_000);
    assert_eq!(big.primes().len(), 1229);
    let trial = |p: u64| p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    assert!(big.primes().iter().all(|&p| trial(p)));
    let t = NumberTheoryTables::new(100);
    assert_eq!(t.prime_in_range(2).unwrap(), 2);
    assert_eq!(t.prime_in_range(10).unwrap(), 11);
    assert_eq!(t.prime_in_range(24).unwrap(), 29);
    assert!(t.prime_in_range(0).is_err());
    assert!(t.prime_in_range(60).is_err());
}

/// Direct recursion and closed forms, written out independently.
fn loss_oracle(gammas: &[f64], z: f64, i: usize) -> (f64, f64, f64, f64) {
    let (mut f, mut fl) = (z, z);
    for &g in &gammas[..i] {
        f = (1.0 + g) * f + g;
        fl = (1.0 - g) * fl - g;
    }
    let up: f64 = gammas[..i].iter().map(|g| 1.0 + 2.0 * g).product();
    let down: f64 = gammas[..i].iter().map(|g| 1.0 - 2.0 * g).product();
    let add: f64 = gammas[..i].iter().map(|g| 2.0 * g).sum();
    (f, fl, z * up + add, z * down - add)
}

#[test]
fn loss_examples() {
    let b = iterative_loss_bound(&LossSchedule { gammas: vec![0.0; 3] }, 5.0, 3).unwrap();
    assert_eq!((b.f, b.f_lower, b.g, b.g_lower), (5.0, 5.0, 5.0, 5.0));
    let b = iterative_loss_bound(&LossSchedule { gammas: vec![0.1] }, 1.0, 1).unwrap();
    for (x, y) in [(b.f, 1.2), (b.g, 1.4), (b.f_lower, 0.8), (b.g_lower, 0.6)] {
        assert!((x - y).abs() < 1e-12);
    }
    assert!(iterative_loss_bound(&LossSchedule { gammas: vec![0.3, 0.3] }, 1.0, 1).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let l = rng.gen_range(1..30);
        let raw: Vec<f64> = (0..l).map(|_| rng.gen::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        let gammas: Vec<f64> = raw.iter().map(|x| x / s * rng.gen_range(0.0..0.5)).collect();
        let z = rng.gen_range(0.0..10.0);
        let i = rng.gen_range(0..=l);
        let b = iterative_loss_bound(&LossSchedule { gammas: gammas.clone() }, z, i).unwrap();
        let o = loss_oracle(&gammas, z, i);
        assert!((b.f - o.0).abs() <= 1e-9 * o.0.abs().max(1.0));
        assert!((b.g - o.2).abs() <= 1e-9 * o.2.abs().max(1.0));
        assert!(b.f <= b.g && b.f_lower >= b.g_lower);
    }
}

#[test]
fn work_is_thread_invariant() {
    let edges = random_edges(3000, 20_000, 5);
    let run = |t: usize| {
        par::with_threads(t, || {
            let w = WorkCounter::new();
            let g = sort_edges_to_csr(&edges, 3000, &w).unwrap();
            let keep: Vec<bool> = (0..3000).map(|v| v % 3 != 0).collect();
            induced_subgraph(&g, &keep, &w).unwrap();
            (g, w.per_phase())
        })
    };
    let one = run(1);
    assert_eq!(run(4), one);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radix_u64_is_stable(keys in prop::collection::vec(any::<u64>(), 0..2000)) {
        let mut items: Vec<(u64, u32)> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let mut oracle = items.clone();
        oracle.sort_by_key(|p| p.0);
        radix_sort_u64(&mut items, &WorkCounter::new());
        prop_assert_eq!(items, oracle);
    }

    #[test]
    fn small_keys_are_stable(keys in prop::collection::vec(1u32..=16, 0..2000)) {
        let payloads: Vec<usize> = (0..keys.len()).collect();
        let got = radix_sort_small_keys(&keys, &payloads, 1 << 16, &WorkCounter::new()).unwrap();
        let mut oracle: Vec<(u32, usize)> = keys.iter().copied().zip(payloads).collect();
        oracle.sort_by_key(|p| p.0);
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn csr_is_permutation_invariant(edges in prop::collection::vec((0u32..40, 0u32..40), 0..200), seed in any::<u64>()) {
        let edges: Vec<(u32, u32)> = edges.into_iter().filter(|e| e.0 != e.1).collect();
        let w = WorkCounter::new();
        let g = sort_edges_to_csr(&edges, 40, &w).unwrap();
        let mut shuffled = edges.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let flipped: Vec<(u32, u32)> = shuffled.iter().map(|&(a, b)| (b, a)).collect();
        prop_assert_eq!(&sort_edges_to_csr(&flipped, 40, &w).unwrap(), &g);
        let oracle: BTreeSet<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        prop_assert_eq!(edge_set(&g), oracle);
    }

    #[test]
    fn compaction_matches_filter(edges in prop::collection::vec((0u32..30, 0u32..30), 0..150), keep in prop::collection::vec(any::<bool>(), 30), drop_seed in any::<u64>()) {
        let edges: Vec<(u32, u32)> = edges.into_iter().filter(|e| e.0 != e.1).collect();
        let g = Graph::from_edges(30, &edges).unwrap();
        // Drop a pseudo-random subset of edges among kept nodes, consistently on both copies.
        let drop = |a: u32, b: u32| (a.min(b) as u64 * 31 + a.max(b) as u64 + drop_seed) % 5 == 0;
        let keep_edge: Vec<bool> = (0..g.adjacency().len()).map(|i| {
            let (a, b) = (g.owner_of(i) as u32, g.adjacency()[i]);
            keep[a as usize] && keep[b as usize] && !drop(a, b)
        }).collect();
        let (h, fwd, back) = compact_subgraph(&g, &keep, &keep_edge, &WorkCounter::new()).unwrap();
        let oracle: BTreeSet<(u32, u32)> = edge_set(&g).into_iter()
            .filter(|&(a, b)| keep[a as usize] && keep[b as usize] && !drop(a, b))
            .map(|(a, b)| (fwd[a as usize].unwrap(), fwd[b as usize].unwrap()))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        prop_assert_eq!(edge_set(&h), oracle);
        for (new, &old) in back.iter().enumerate() {
            prop_assert_eq!(fwd[old as usize], Some(new as u32));
        }
        prop_assert_eq!(back.len(), keep.iter().filter(|&&k| k).count());
    }

    #[test]
    fn stored_roots_square_back(idx in 0usize..100) {
        let t = NumberTheoryTables::new(600);
        let p = t.primes()[idx % t.primes().len()];
        let f = t.field(p).unwrap();
        for (y, z) in f.residues() {
            prop_assert_eq!(z * z % p, y);
            prop_assert!((0..z).all(|s| s * s % p != y));
        }
    }

    #[test]
    fn loss_bounds_hold(raw in prop::collection::vec(0.0f64..1.0, 1..40), total in 0.0f64..0.5, z in 0.0f64..1e3, frac in 0.0f64..=1.0) {
        let s: f64 = raw.iter().sum();
        let gammas: Vec<f64> = if s > 0.0 { raw.iter().map(|x| x / s * total).collect() } else { raw.clone() };
        let i = (frac * gammas.len() as f64) as usize;
        let b = iterative_loss_bound(&LossSchedule { gammas }, z, i).unwrap();
        prop_assert!(b.f <= b.g);
        prop_assert!(b.f_lower >= b.g_lower);
    }
}
