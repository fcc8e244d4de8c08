//! Deterministic hitting sets.
//!
//! Given a bipartite graph `U ⊔ V` with sampling levels on `V`, pick
//! `S ⊆ V` that hits each `u` about as often as sampling `v` with
//! probability `2^-k_v` would, for a large-importance subset `U_good`.
//! Sampling is replaced by repeated halving rounds, each derandomized by
//! [`crate::rounding::local_round`] on a bucketed quadratic potential.

mod high;
mod instance;
mod low;
pub mod potential;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::ParamSet;
use crate::par;
use crate::work::WorkCounter;

pub use potential::{Potential, PotentialReading};
pub use high::{current_level, high_half_potential, high_prob_half, high_prob_regime, HighHalfResult};
pub use instance::{parse_hset, pow2neg, write_hset, BipartiteInstance};
pub use low::{low_half_potentials, low_prob_half, low_prob_regime, HalfSampleResult, HalfSlacks};
pub(crate) use high::{bucket_potential, high_bucket_size, high_half_core, high_regime_with, trimmed_buckets};
pub(crate) use low::{level_buckets, standard_potentials, low_bucket_size, low_half_core, low_regime_with};

/// Outcome of a hitting-set computation over the original instance ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingResult {
    pub selected: Vec<bool>,
    pub u_good: Vec<bool>,
    pub importance_fraction: f64,
    pub hits: Vec<u64>,
    pub targets: Vec<f64>,
    /// Smallest `C` with `hits ≤ C·target + C` over `U_good`.
    pub measured_c: f64,
    /// Largest shortfall `0.5·target − 0.5 − hits` over `U_good`; zero when
    /// the lower contract holds.
    pub lower_shortfall: f64,
    pub rounds: usize,
}

impl HittingResult {
    pub fn from_selection(inst: &BipartiteInstance, selected: Vec<bool>, u_good: Vec<bool>, rounds: usize) -> Self {
        let targets = inst.probability_sums();
        let hits: Vec<u64> = par::map_range(inst.u_count(), |u| {
            inst.nbrs(u).iter().filter(|&&v| selected[v as usize]).count() as u64
        });
        let total = inst.total_importance();
        let good = par::sum_f64(inst.u_count(), |u| if u_good[u] { inst.imp[u] } else { 0.0 });
        let mut measured_c: f64 = 0.0;
        let mut lower_shortfall: f64 = 0.0;
        for u in 0..inst.u_count() {
            if u_good[u] {
                measured_c = measured_c.max(hits[u] as f64 / (targets[u] + 1.0));
                lower_shortfall = lower_shortfall.max(0.5 * targets[u] - 0.5 - hits[u] as f64);
            }
        }
        HittingResult {
            selected,
            u_good,
            importance_fraction: if total > 0.0 { good / total } else { 1.0 },
            hits,
            targets,
            measured_c,
            lower_shortfall,
            rounds,
        }
    }
}

/// Running tallies of potential and shrinkage checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PotentialAudit {
    pub checks: u64,
    pub violations: u64,
    /// Largest observed `value / bound`.
    pub worst_ratio: f64,
}

static SHRINK_CHECKS: AtomicU64 = AtomicU64::new(0);
static SHRINK_VIOLATIONS: AtomicU64 = AtomicU64::new(0);
static POTENTIALS: Mutex<Vec<(String, PotentialAudit)>> = Mutex::new(Vec::new());

pub(crate) fn record_potential(family: &str, value: f64, bound: f64) -> bool {
    let ok = value <= bound;
    let mut all = POTENTIALS.lock().unwrap();
    let idx = match all.iter().position(|(n, _)| n == family) {
        Some(i) => i,
        None => {
            all.push((family.to_string(), PotentialAudit::default()));
            all.len() - 1
        }
    };
    let a = &mut all[idx].1;
    a.checks += 1;
    a.violations += (!ok) as u64;
    if bound > 0.0 {
        a.worst_ratio = a.worst_ratio.max(value / bound);
    }
    ok
}

pub(crate) fn record_shrinkage(ok: bool) {
    SHRINK_CHECKS.fetch_add(1, Ordering::SeqCst);
    if !ok {
        SHRINK_VIOLATIONS.fetch_add(1, Ordering::SeqCst);
    }
}

/// Process-wide potential certificate tallies, by family.
pub fn potential_audit() -> Vec<(String, PotentialAudit)> {
    POTENTIALS.lock().unwrap().clone()
}

/// Process-wide `(checks, violations)` of the low-regime shrinkage bound.
pub fn shrinkage_audit() -> (u64, u64) {
    (SHRINK_CHECKS.load(Ordering::SeqCst), SHRINK_VIOLATIONS.load(Ordering::SeqCst))
}

/// Hitting set for arbitrary levels in `0..=ceil(log2 N)`.
///
/// Nodes above level `K` first go through the low-probability regime, which
/// lifts the survivors to level `K`. Everything then goes through the
/// high-probability regime.
pub fn hitting_set(inst: &BipartiteInstance, params: &ParamSet, work: &WorkCounter) -> Result<HittingResult> {
    inst.validate()?;
    params.validate()?;
    let big_k = params.big_k(inst.n_bound);
    let (nu, nv) = (inst.u_count(), inst.v_count());
    let is_low: Vec<bool> = inst.level.iter().map(|&k| k > big_k).collect();
    let floor = params.degree_floor(inst.n_bound);
    let low_deg: Vec<u64> = par::map_range(nu, |u| {
        inst.nbrs(u).iter().filter(|&&v| is_low[v as usize]).count() as u64
    });
    let u_low: Vec<bool> = low_deg.iter().map(|&d| d > 0 && d >= floor).collect();
    work.charge("hitting", (inst.edge_count() + nu + nv) as u64);

    let mut in_high: Vec<bool> = is_low.iter().map(|&l| !l).collect();
    let mut u_high: Vec<bool> = vec![true; nu];
    let mut rounds = 0;
    if is_low.iter().any(|&l| l) {
        let (sub, u_map, v_map) = inst.restrict(&u_low, &is_low, None, &inst.level, work)?;
        let low = low_prob_regime(&sub, params, work)?;
        rounds += low.rounds;
        for (i, &v) in v_map.iter().enumerate() {
            in_high[v as usize] = low.selected[i];
        }
        for (i, &u) in u_map.iter().enumerate() {
            u_high[u as usize] = low.u_good[i];
        }
    }
    let clamped: Vec<u32> = inst.level.iter().map(|&k| k.min(big_k)).collect();
    let (sub, u_map, v_map) = inst.restrict(&u_high, &in_high, None, &clamped, work)?;
    let high = high_prob_regime(&sub, params, work)?;
    rounds += high.rounds;
    let mut selected = vec![false; nv];
    for (i, &v) in v_map.iter().enumerate() {
        selected[v as usize] = high.selected[i];
    }
    let mut u_good = vec![false; nu];
    for (i, &u) in u_map.iter().enumerate() {
        u_good[u as usize] = high.u_good[i];
    }
    Ok(HittingResult::from_selection(inst, selected, u_good, rounds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular(nu: usize, deg: usize, level: u32, nv: usize, n_bound: u64) -> BipartiteInstance {
        let mut edges = Vec::new();
        for u in 0..nu {
            for i in 0..deg {
                edges.push((u as u32, ((u * 7 + i * 13) % nv) as u32));
            }
        }
        BipartiteInstance::from_edges(vec![1.0; nu], vec![level; nv], &edges, n_bound).unwrap()
    }

    #[test]
    fn potential_identity() {
        let mut p = Potential::new("t", 3);
        p.push_bucket(&[0, 1, 2], 0.5);
        p.push_bucket(&[2, 3, 4], 2.0);
        p.linear.push((1, 0.3));
        p.pairs.push((0, 4, 0.7));
        let w = WorkCounter::new();
        let inst = potential::assemble(5, std::slice::from_ref(&p), 0.1, &w);
        let c = potential::constant_term(std::slice::from_ref(&p));
        for mask in 0..32u32 {
            let sel: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
            let lhs = p.evaluate(&sel);
            let rhs = c - inst.objective(&sel);
            assert!((lhs - rhs).abs() < 1e-12, "{mask}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn high_half_on_regular() {
        let inst = regular(40, 16, 3, 200, 1 << 10);
        let r = high_prob_half(&inst, 0.5, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(r.potential <= r.potential_bound);
        assert!(r.importance_fraction >= 0.5);
    }

    #[test]
    fn high_regime_all_below_floor_keeps_everything() {
        let inst = regular(5, 4, 0, 20, 1 << 10);
        let r = high_prob_regime(&inst, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(r.selected.iter().all(|&s| s));
        assert_eq!(r.importance_fraction, 1.0);
    }

    #[test]
    fn low_regime_shrinks() {
        let n = 1u64 << 16;
        let p = ParamSet::desk();
        assert_eq!(p.big_k(n), 12);
        let inst = regular(50, 40, 14, 2000, n);
        let r = low_prob_regime(&inst, &p, &WorkCounter::new()).unwrap();
        assert!(r.rounds >= 2);
        let (checks, bad) = shrinkage_audit();
        assert!(checks >= 2);
        assert_eq!(bad, 0);
    }

    #[test]
    fn hitting_set_mixed_levels() {
        let n = 1u64 << 12;
        let mut edges = Vec::new();
        let nv = 600;
        for u in 0..60u32 {
            for i in 0..24u32 {
                edges.push((u, (u * 11 + i * 17) % nv));
            }
        }
        let level: Vec<u32> = (0..nv).map(|v| 1 + v % 4).collect();
        let inst = BipartiteInstance::from_edges(vec![1.0; 60], level, &edges, n).unwrap();
        let r = hitting_set(&inst, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(r.importance_fraction >= 0.75, "{}", r.importance_fraction);
        assert_eq!(r.lower_shortfall, 0.0);
        assert!(r.measured_c <= 1000.0);
    }
}
