//! Acceptance criteria. One PASS/FAIL line per criterion; the process exits
//! nonzero if any criterion fails.

use std::process::ExitCode;

use dpar::graph::Graph;
use dpar::hitting::{
    high_half_potential, high_prob_half, hitting_set, low_half_potentials, low_prob_half, potential_audit,
    shrinkage_audit, BipartiteInstance, Potential,
};
use dpar::loss::{iterative_loss_bound, LossSchedule};
use dpar::matching::maximal_matching;
use dpar::mis::{
    aux_audit, luby_mis_baseline, maximal_independent_set, mis_high_half_potentials, mis_high_prob_half,
    mis_low_half_potentials, mis_low_prob_half, MisAuxInstance,
};
use dpar::rounding::{audit as rounding_audit, cut_weight, max_cut_half};
use dpar::coloring::defective_coloring;
use dpar::{par, ParamSet, WorkCounter};
use dpar_bench::gen::{generate_graph, generate_hitting, with_edge_weights, GraphKind, GraphSpec, HittingSpec};
use dpar_bench::verify::{
    verify_cut, verify_defective_coloring, verify_hitting, verify_independent_set, verify_matching,
    HittingThresholds,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Tally {
    failed: Vec<String>,
}

impl Tally {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(name.to_string());
        }
    }
}

const KINDS: [GraphKind; 5] = [GraphKind::Gnm, GraphKind::Grid, GraphKind::Star, GraphKind::Complete, GraphKind::Powerlaw];

/// Mixed-kind graph with at most `max_n` nodes.
fn mixed_graph(i: usize, max_n: usize, rng: &mut ChaCha8Rng) -> GraphSpec {
    let kind = KINDS[i % KINDS.len()];
    let n = match kind {
        GraphKind::Complete => rng.gen_range(1..=120.min(max_n)),
        _ => rng.gen_range(1..=max_n),
    };
    let m = match kind {
        GraphKind::Gnm => {
            let cap = n * (n - 1) / 2;
            Some((n * [1, 2, 4, 8, 16, 32][rng.gen_range(0..6)] / 2).min(cap))
        }
        GraphKind::Powerlaw => Some(rng.gen_range(1..=6)),
        _ => None,
    };
    GraphSpec::new(kind, n, m, rng.gen())
}

fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let spec = mixed_graph(i, max_n, &mut rng);
            (spec.label(), generate_graph(&spec).unwrap())
        })
        .collect()
}

fn mis_and_matching(t: &mut Tally, params: &ParamSet) {
    let graphs = corpus(300, 2000, 1);
    let (mut mis_ok, mut mm_ok) = (0, 0);
    let (mut mis_first, mut mm_first) = (None, None);
    for (label, g) in &graphs {
        let w = WorkCounter::new();
        match maximal_independent_set(g, params, &w) {
            Ok(s) if verify_independent_set(g, &s).pass => mis_ok += 1,
            r => {
                mis_first.get_or_insert(format!("{label}: {:?}", r.map(|s| verify_independent_set(g, &s))));
            }
        }
        match maximal_matching(g, params, &w) {
            Ok(m) if verify_matching(g, &m).pass => mm_ok += 1,
            r => {
                mm_first.get_or_insert(format!("{label}: {:?}", r.map(|m| verify_matching(g, &m))));
            }
        }
    }
    let n = graphs.len();
    t.line(
        "mis_correctness",
        mis_ok == n,
        format!("{mis_ok}/{n} graphs independent and maximal{}", mis_first.map_or(String::new(), |s| format!("; first failure {s}"))),
    );
    t.line(
        "matching_correctness",
        mm_ok == n,
        format!("{mm_ok}/{n} graphs matched and maximal{}", mm_first.map_or(String::new(), |s| format!("; first failure {s}"))),
    );
}

fn weighted_corpus() -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    corpus(50, 1000, 3)
        .into_iter()
        .map(|(l, g)| {
            let w: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen_range(0.0..10.0)).collect();
            (l, with_edge_weights(g, &w).unwrap())
        })
        .collect()
}

fn defective_and_cut(t: &mut Tally) {
    let graphs = weighted_corpus();
    let (mut runs, mut ok, mut cut_runs, mut cut_ok) = (0, 0, 0, 0);
    let (mut worst_mono, mut worst_cut) = (0.0f64, f64::INFINITY);
    for (_, g) in &graphs {
        for eps in [1.0, 0.5, 0.25, 0.1] {
            let w = WorkCounter::new();
            let c = defective_coloring(g, eps, &w).unwrap();
            let v = verify_defective_coloring(g, &c.colors, eps);
            runs += 1;
            ok += v.pass as usize;
            let total = g.total_weight();
            if total > 0.0 {
                worst_mono = worst_mono.max(v.certificates[1].measured / (eps * total));
            }
            let side = max_cut_half(g, eps, &w).unwrap();
            let v = verify_cut(g, &side, eps);
            cut_runs += 1;
            cut_ok += v.pass as usize;
            if total > 0.0 {
                worst_cut = worst_cut.min(cut_weight(g, &side) / total);
            }
        }
    }
    t.line(
        "defective_coloring",
        ok == runs,
        format!("{ok}/{runs} runs with palette <= 3*ceil(1/eps) and mono <= eps*W; worst mono/(eps*W) = {worst_mono:.3}"),
    );
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let side = max_cut_half(&k4, 0.1, &WorkCounter::new()).unwrap();
    let k4_cut = cut_weight(&k4, &side);
    t.line(
        "max_cut",
        cut_ok == cut_runs && k4_cut >= 3.0,
        format!("{cut_ok}/{cut_runs} cuts >= (1/2 - eps)W, smallest cut/W = {worst_cut:.3}; K4 at eps=0.1 cuts {k4_cut} edges"),
    );
}

const SAMPLES: usize = 10_000;

/// Largest `|mean − expected| / SE` over the potentials, using independent
/// fair half-samples of `nv` nodes.
fn calibrate(pots: &[Potential], expected: &[f64], nv: usize, rng: &mut ChaCha8Rng) -> (f64, bool) {
    let mut sum = vec![0.0f64; pots.len()];
    let mut sq = vec![0.0f64; pots.len()];
    let mut sel = vec![false; nv];
    for _ in 0..SAMPLES {
        for s in sel.iter_mut() {
            *s = rng.gen();
        }
        for (i, p) in pots.iter().enumerate() {
            let x = p.evaluate(&sel);
            sum[i] += x;
            sq[i] += x * x;
        }
    }
    let mut worst = 0.0f64;
    let mut ok = true;
    for i in 0..pots.len() {
        let n = SAMPLES as f64;
        let mean = sum[i] / n;
        let var = (sq[i] / n - mean * mean).max(0.0) * n / (n - 1.0);
        let se = (var / n).sqrt();
        let dev = (mean - expected[i]).abs();
        if se > 0.0 {
            let z = dev / se;
            worst = worst.max(z);
            ok &= z <= 3.0;
        } else {
            ok &= dev <= 1e-9 * expected[i].abs().max(1.0);
        }
    }
    (worst, ok)
}

const CAL_N: u64 = 1 << 40;

/// Low-level instance: levels above `K` for `N = 2^40`.
fn low_instance(seed: u64, params: &ParamSet) -> BipartiteInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.big_k(CAL_N);
    let (nu, nv) = (10usize, 1500usize);
    let level: Vec<u32> = (0..nv).map(|_| rng.gen_range(k + 1..=k + 3)).collect();
    let imp: Vec<f64> = (0..nu).map(|_| rng.gen_range(0.1..3.0)).collect();
    let mut edges = Vec::new();
    for u in 0..nu as u32 {
        let d = rng.gen_range(100..600);
        for _ in 0..d {
            edges.push((u, rng.gen_range(0..nv as u32)));
        }
    }
    BipartiteInstance::from_edges(imp, level, &edges, CAL_N).unwrap()
}

fn high_instance(seed: u64, params: &ParamSet) -> BipartiteInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.big_k(CAL_N);
    let (nu, nv) = (40usize, 1500usize);
    let level: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..=k)).collect();
    let imp: Vec<f64> = (0..nu).map(|_| rng.gen_range(0.1..3.0)).collect();
    let mut edges = Vec::new();
    for u in 0..nu as u32 {
        let d = rng.gen_range(0..200);
        for _ in 0..d {
            edges.push((u, rng.gen_range(0..nv as u32)));
        }
    }
    BipartiteInstance::from_edges(imp, level, &edges, CAL_N).unwrap()
}

fn aux_instance(core: BipartiteInstance, seed: u64) -> MisAuxInstance {
    let nv = core.v_count();
    let g = generate_graph(&GraphSpec { weighted: true, ..GraphSpec::new(GraphKind::Gnm, nv, Some(4 * nv), seed) }).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    let vw: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.0..1.0)).collect();
    MisAuxInstance::new(core, g, vw).unwrap()
}

/// `Σ imp_u` over `u` with at least `b` neighbors, i.e. with a bucket.
fn bucketed_importance(inst: &BipartiteInstance, b: usize) -> f64 {
    (0..inst.u_count()).filter(|&u| inst.nbrs(u).len() >= b).map(|u| inst.imp[u]).sum()
}

fn calibration_and_certificates(t: &mut Tally, params: &ParamSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = WorkCounter::new();
    let low_gamma = params.low_gamma(0, CAL_N);
    let high_gamma = 0.25;
    let high_b = (1.0 / high_gamma as f64).powf(params.beta).ceil() as usize;
    let mut lines: Vec<(String, f64, bool, usize)> = Vec::new();
    let mut record = |name: &str, r: (f64, bool)| match lines.iter_mut().find(|l| l.0 == name) {
        Some(l) => {
            l.1 = l.1.max(r.0);
            l.2 &= r.1;
            l.3 += 1;
        }
        None => lines.push((name.to_string(), r.0, r.1, 1)),
    };
    let mut aux_ok = true;
    for i in 0..10u64 {
        let low = low_instance(100 + i, params);
        let nv = low.v_count();
        let p = low_half_potentials(&low, low_gamma, params, &w).unwrap();
        assert!(p.iter().all(|x| x.bucket_count() > 0));
        record("low phi1-phi3 (expect 1 each)", calibrate(&p, &[1.0; 3], nv, &mut rng));
        low_prob_half(&low, low_gamma, params, &w).unwrap();

        let aux = aux_instance(low, 200 + i);
        let p = mis_low_half_potentials(&aux, low_gamma, params, &w).unwrap();
        assert!(p[3].bucket_count() > 0);
        record(
            "mis low phi1-phi5 (expect 1,1,1,1,100/gamma)",
            calibrate(&p, &[1.0, 1.0, 1.0, 1.0, 100.0 / low_gamma], nv, &mut rng),
        );
        aux_ok &= mis_low_prob_half(&aux, low_gamma, params, &w).unwrap().1.holds();

        let high = high_instance(300 + i, params);
        let nv = high.v_count();
        let quarter = bucketed_importance(&high, high_b) / 4.0;
        let p = high_half_potential(&high, high_gamma, params, &w).unwrap();
        record("high phi (expect sum imp/4)", calibrate(&[p], &[quarter], nv, &mut rng));
        high_prob_half(&high, high_gamma, params, &w).unwrap();

        let total = high.total_importance();
        let aux = aux_instance(high, 400 + i);
        let p = mis_high_half_potentials(&aux, high_gamma, params, &w).unwrap();
        record(
            "mis high phi1-phi2 (expect 4/W * sum imp/4, 10/gamma)",
            calibrate(&p, &[4.0 * quarter / total, 10.0 / high_gamma], nv, &mut rng),
        );
        aux_ok &= mis_high_prob_half(&aux, high_gamma, params, &w).unwrap().1.holds();
    }
    let all = lines.iter().all(|l| l.2);
    let detail = lines
        .iter()
        .map(|l| format!("{} over {} instances: worst |z| = {:.2}", l.0, l.3, l.1))
        .collect::<Vec<_>>()
        .join("; ");
    t.line("potential_calibration", all, format!("{SAMPLES} samples per instance; {detail}"));

    // Exercise the full pipelines once more so every family is certified
    // inside real runs too.
    for (_, g) in corpus(40, 3000, 11) {
        maximal_independent_set(&g, params, &w).unwrap();
    }
    let audits = potential_audit();
    let families = ["low_half", "high_half", "mis_low_half", "mis_high_half"];
    let present = families.iter().all(|f| audits.iter().any(|(n, a)| n == f && a.checks > 0));
    let clean = audits.iter().all(|(_, a)| a.violations == 0);
    let (aux_checks, aux_viol) = aux_audit();
    let detail = audits
        .iter()
        .map(|(n, a)| format!("{n}: {} checks, {} violations, worst value/bound {:.3}", a.checks, a.violations, a.worst_ratio))
        .collect::<Vec<_>>()
        .join("; ");
    t.line(
        "potential_certificates",
        present && clean && aux_ok && aux_viol == 0,
        format!("{detail}; aux weight bound {aux_checks} checks, {aux_viol} violations"),
    );
}

fn hitting_contract(t: &mut Tally, params: &ParamSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let thresholds = HittingThresholds::for_mode(params.mode);
    let (mut ok, mut worst_c, mut worst_frac, mut low_engaged) = (0, 0.0f64, 1.0f64, 0);
    let mut first = None;
    for i in 0..200 {
        let u = rng.gen_range(5..80);
        let v = rng.gen_range(500..4000);
        let cap = dpar::scan::small_key_limit((u + v) as u64);
        let spec = HittingSpec { u, v, max_level: rng.gen_range(cap / 2..=cap), seed: 1000 + i };
        let inst = generate_hitting(&spec).unwrap();
        let before = shrinkage_audit().0;
        let r = hitting_set(&inst, params, &WorkCounter::new()).unwrap();
        low_engaged += (shrinkage_audit().0 > before) as usize;
        let v = verify_hitting(&inst, &r, thresholds);
        worst_c = worst_c.max(v.certificates[2].measured);
        worst_frac = worst_frac.min(v.certificates[0].measured);
        if v.pass {
            ok += 1;
        } else if first.is_none() {
            first = Some(format!("{}: {:?}", spec.label(), v.certificates));
        }
    }
    t.line(
        "hitting_set_contract",
        ok == 200,
        format!(
            "{ok}/200 instances with importance >= {} and hits in [0.5S-0.5, C*S+C]; worst fraction {worst_frac:.3}, measured C max {worst_c:.3} (cap {}); low regime ran on {low_engaged}; proof-mode thresholds not asserted (paper constants need N far beyond desk scale){}",
            thresholds.importance,
            thresholds.max_c,
            first.map_or(String::new(), |s| format!("; first failure {s}"))
        ),
    );
}

fn loss_bound_check(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut bad = 0;
    for _ in 0..10_000 {
        let l = rng.gen_range(1..=60);
        let mut gammas: Vec<f64> = (0..l).map(|_| rng.gen::<f64>().powi(3)).collect();
        let s: f64 = gammas.iter().sum();
        let target = rng.gen_range(0.0..0.5);
        if s > 0.0 {
            gammas.iter_mut().for_each(|g| *g *= target / s);
        }
        let z = rng.gen_range(0.0..100.0);
        let i = rng.gen_range(0..=l);
        let b = iterative_loss_bound(&LossSchedule { gammas }, z, i).unwrap();
        if !(b.f <= b.g && b.f_lower >= b.g_lower) {
            bad += 1;
        }
    }
    t.line("iterative_loss", bad == 0, format!("{bad} violations of f <= g, f' >= g' over 10000 schedules"));
}

fn shrinkage(t: &mut Tally) {
    let (checks, viol) = shrinkage_audit();
    t.line("shrinkage", checks > 0 && viol == 0, format!("{checks} low-probability halvings, {viol} violations"));
}

fn work_efficiency(t: &mut Tally, params: &ParamSet) {
    let mut rows = Vec::new();
    for k in 12..=18u32 {
        let n = 1usize << k;
        let g = generate_graph(&GraphSpec::new(GraphKind::Gnm, n, Some(8 * n), k as u64)).unwrap();
        let size = (g.node_count() + g.edge_count()) as f64;
        let w = WorkCounter::new();
        let s = maximal_independent_set(&g, params, &w).unwrap();
        assert!(verify_independent_set(&g, &s).pass);
        let det = w.total() as f64 / size;
        let w = WorkCounter::new();
        luby_mis_baseline(&g, k as u64, &w).unwrap();
        let luby = w.total() as f64 / size;
        rows.push((k, det, luby));
    }
    let (_, first, _) = rows[0];
    let (_, last, luby_last) = *rows.last().unwrap();
    let series = rows.iter().map(|(k, d, l)| format!("2^{k}: {d:.2} vs {l:.2}")).collect::<Vec<_>>().join(", ");
    t.line(
        "work_efficiency",
        last <= 4.0 * first && last <= 50.0 * luby_last,
        format!(
            "work/(m+n) deterministic vs baseline: {series}; growth {:.2}x (limit 4x), ratio to baseline {:.2}x (limit 50x)",
            last / first,
            last / luby_last
        ),
    );
}

fn determinism(t: &mut Tally, params: &ParamSet) {
    let graphs = corpus(20, 3000, 19);
    let mut differ = Vec::new();
    for (label, g) in &graphs {
        let run = |threads: usize| {
            par::with_threads(threads, || {
                let w = WorkCounter::new();
                let s = maximal_independent_set(g, params, &w).unwrap();
                let m = maximal_matching(g, params, &w).unwrap();
                let c = defective_coloring(g, 0.25, &w).unwrap();
                (serde_json::to_vec(&(s, m, c)).unwrap(), w.per_phase())
            })
        };
        let one = run(1);
        if run(2) != one || run(8) != one {
            differ.push(label.clone());
        }
    }
    t.line(
        "determinism",
        differ.is_empty(),
        format!("{}/20 inputs byte-identical (MIS, matching, defective coloring, work) at 1, 2 and 8 threads{}", 20 - differ.len(),
            if differ.is_empty() { String::new() } else { format!("; differing {differ:?}") }),
    );
}

fn main() -> ExitCode {
    let params = ParamSet::desk();
    let mut t = Tally { failed: Vec::new() };
    mis_and_matching(&mut t, &params);
    defective_and_cut(&mut t);
    calibration_and_certificates(&mut t, &params);
    hitting_contract(&mut t, &params);
    shrinkage(&mut t);
    loss_bound_check(&mut t);
    work_efficiency(&mut t, &params);
    determinism(&mut t, &params);
    let (calls, viol) = rounding_audit();
    t.line("rounding_certificate", calls > 0 && viol == 0, format!("{calls} local rounding calls, {viol} violations"));
    if t.failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {:?}", t.failed);
        ExitCode::FAILURE
    }
}
