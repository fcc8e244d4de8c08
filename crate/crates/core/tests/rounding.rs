use dpar::graph::Graph;
use dpar::rounding::{cut_weight, local_round, max_cut_half, RoundingInstance};
use dpar::WorkCounter;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> RoundingInstance {
    let utils = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
    let m = rng.gen_range(0..3 * n);
    let cost_edges = (0..m)
        .filter_map(|_| {
            let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
            (a != b).then(|| (a, b, rng.gen_range(0.0..2.0)))
        })
        .collect();
    RoundingInstance { utils, cost_edges, eps: rng.gen_range(0.05..0.5) }
}

fn objective(inst: &RoundingInstance, sel: &[bool]) -> f64 {
    let u: f64 = (0..sel.len()).filter(|&v| sel[v]).map(|v| inst.utils[v]).sum();
    let c: f64 = inst.cost_edges.iter().filter(|e| sel[e.0 as usize] && sel[e.1 as usize]).map(|e| e.2).sum();
    u - c
}

/// Exact conditional expectation, over uniform choices for the nodes with
/// `fixed[v] == None`, of the objective with edges inside one class dropped.
fn conditional(inst: &RoundingInstance, classes: &[u64], fixed: &[Option<bool>]) -> f64 {
    let free: Vec<usize> = (0..fixed.len()).filter(|&v| fixed[v].is_none()).collect();
    let mut total = 0.0;
    for mask in 0u32..(1 << free.len()) {
        let mut sel: Vec<bool> = fixed.iter().map(|x| x.unwrap_or(false)).collect();
        for (j, &v) in free.iter().enumerate() {
            sel[v] = mask >> j & 1 == 1;
        }
        let u: f64 = (0..sel.len()).filter(|&v| sel[v]).map(|v| inst.utils[v]).sum();
        let c: f64 = inst
            .cost_edges
            .iter()
            .filter(|e| classes[e.0 as usize] != classes[e.1 as usize] && sel[e.0 as usize] && sel[e.1 as usize])
            .map(|e| e.2)
            .sum();
        total += u - c;
    }
    total / (1u64 << free.len()) as f64
}

#[test]
fn all_positive_no_costs() {
    let inst = RoundingInstance { utils: vec![1.0, 1.0], cost_edges: vec![], eps: 0.1 };
    let out = local_round(&inst, &WorkCounter::new()).unwrap();
    assert_eq!(out.selected, vec![true, true]);
    assert_eq!(objective(&inst, &out.selected), 2.0);
}

#[test]
fn zero_utils_one_edge() {
    let inst = RoundingInstance { utils: vec![0.0, 0.0], cost_edges: vec![(0, 1, 1.0)], eps: 0.1 };
    let out = local_round(&inst, &WorkCounter::new()).unwrap();
    let obj = objective(&inst, &out.selected);
    assert!(obj >= -0.35);
    assert!(obj >= -0.25);
    assert!(!(out.selected[0] && out.selected[1]));
}

#[test]
fn parallel_edges_merge() {
    let inst = RoundingInstance { utils: vec![1.0, 1.0], cost_edges: vec![(0, 1, 0.8), (1, 0, 0.8)], eps: 0.1 };
    let out = local_round(&inst, &WorkCounter::new()).unwrap();
    assert_eq!(out.selected.iter().filter(|&&s| s).count(), 1);
}

#[test]
fn invalid_instances_rejected() {
    let w = WorkCounter::new();
    let bad = [
        RoundingInstance { utils: vec![0.0], cost_edges: vec![], eps: 0.0 },
        RoundingInstance { utils: vec![0.0, 0.0], cost_edges: vec![(0, 1, -1.0)], eps: 0.1 },
        RoundingInstance { utils: vec![0.0, 0.0], cost_edges: vec![(0, 2, 1.0)], eps: 0.1 },
        RoundingInstance { utils: vec![f64::NAN], cost_edges: vec![], eps: 0.1 },
    ];
    for inst in &bad {
        assert!(local_round(inst, &w).is_err());
    }
}

#[test]
fn small_instances_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.gen_range(1..=12);
        let inst = random_instance(&mut rng, n);
        let out = local_round(&inst, &WorkCounter::new()).unwrap();
        let obj = objective(&inst, &out.selected);
        let usum: f64 = inst.utils.iter().sum();
        let csum: f64 = inst.cost_edges.iter().map(|e| e.2).sum();
        assert!(obj >= 0.5 * usum - 0.25 * csum - inst.eps * csum - 1e-9);
        assert!((obj - out.certificate.objective).abs() < 1e-9);
        let best = (0u32..1 << n)
            .map(|mask| objective(&inst, &(0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>()))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(obj <= best + 1e-9);

        // Class by class, the conditional expectation never drops, and no
        // single flip inside the decided class would raise it.
        let mut order: Vec<u64> = out.classes.clone();
        order.sort_unstable();
        order.dedup();
        let mut fixed = vec![None; n];
        let mut prev = conditional(&inst, &out.classes, &fixed);
        for &c in &order {
            for v in 0..n {
                if out.classes[v] == c {
                    fixed[v] = Some(out.selected[v]);
                }
            }
            let now = conditional(&inst, &out.classes, &fixed);
            assert!(now >= prev - 1e-9, "class {c}: {now} < {prev}");
            for v in (0..n).filter(|&v| out.classes[v] == c) {
                let mut flipped = fixed.clone();
                flipped[v] = Some(!out.selected[v]);
                assert!(conditional(&inst, &out.classes, &flipped) <= now + 1e-9);
            }
            prev = now;
        }
    }
}

#[test]
fn random_halves_match_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let inst = random_instance(&mut rng, 40);
        let usum: f64 = inst.utils.iter().sum();
        let csum: f64 = inst.cost_edges.iter().map(|e| e.2).sum();
        let expect = 0.5 * usum - 0.25 * csum;
        let samples: Vec<f64> = (0..10_000)
            .map(|_| objective(&inst, &(0..40).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        assert!((mean - expect).abs() <= 3.0 * se + 1e-12, "mean {mean} vs {expect} (se {se})");
    }
}

#[test]
fn cut_examples() {
    let w = WorkCounter::new();
    let g = Graph::empty(4);
    assert!(max_cut_half(&g, 0.1, &w).is_ok());
    let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    assert_eq!(cut_weight(&g, &max_cut_half(&g, 0.1, &w).unwrap()), 1.0);
    let k4: Vec<(u32, u32)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let g = Graph::from_edges(4, &k4).unwrap();
    let cut = cut_weight(&g, &max_cut_half(&g, 0.1, &w).unwrap());
    let best = (0u32..16)
        .map(|mask| cut_weight(&g, &(0..4).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    assert_eq!(best, 4.0);
    assert!(cut >= 3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rounding_bound(seed in any::<u64>(), n in 1usize..300) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, n);
        let out = local_round(&inst, &WorkCounter::new()).unwrap();
        let usum: f64 = inst.utils.iter().sum();
        let csum: f64 = inst.cost_edges.iter().map(|e| e.2).sum();
        prop_assert!(objective(&inst, &out.selected) >= 0.5 * usum - 0.25 * csum - inst.eps * csum - 1e-9);
        prop_assert!(out.certificate.mono_cost <= inst.eps * csum + 1e-9);
    }

    #[test]
    fn cut_bound(seed in any::<u64>(), n in 2usize..300, eps in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(u32, u32, f64)> = (0..4 * n)
            .filter_map(|_| {
                let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
                (a < b).then(|| (a, b, rng.gen::<f64>()))
            })
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let edges: Vec<_> = edges.into_iter().filter(|e| seen.insert((e.0, e.1))).collect();
        let g = Graph::from_weighted_edges(n, &edges).unwrap();
        let side = max_cut_half(&g, eps, &WorkCounter::new()).unwrap();
        let total: f64 = edges.iter().map(|e| e.2).sum();
        let cut: f64 = edges.iter().filter(|e| side[e.0 as usize] != side[e.1 as usize]).map(|e| e.2).sum();
        prop_assert!(cut >= (0.5 - eps) * total - 1e-9);
    }
}
