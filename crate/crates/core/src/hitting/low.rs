//! Halving rounds for nodes with sampling probability below `2^-K`.

use serde::{Deserialize, Serialize};

use super::instance::{pow2neg, BipartiteInstance};
use super::potential::{round_potentials, Potential, PotentialReading};
use super::{record_shrinkage, HittingResult};
use crate::error::{contract, Error, Result};
use crate::par;
use crate::params::ParamSet;
use crate::work::WorkCounter;

/// Per-`(u, level)` neighborhoods trimmed to multiples of `b` and cut into
/// buckets of consecutive ids.
#[derive(Clone, Debug, Default)]
pub(crate) struct LevelBuckets {
    pub b: usize,
    /// Per instance edge: survives the trimming (the edge set of `H'`).
    pub kept: Vec<bool>,
    pub owner: Vec<u32>,
    pub level: Vec<u32>,
    /// Flattened, `b` per bucket.
    pub members: Vec<u32>,
    /// Per `u`: `Σ_{v ∈ N_H'(u)} 2^-k_v`.
    pub mass: Vec<f64>,
    pub kept_count: usize,
}

impl LevelBuckets {
    pub fn bucket(&self, i: usize) -> &[u32] {
        &self.members[i * self.b..(i + 1) * self.b]
    }

    pub fn count(&self) -> usize {
        self.owner.len()
    }
}

pub(crate) fn level_buckets(inst: &BipartiteInstance, b: usize, work: &WorkCounter) -> LevelBuckets {
    struct Local {
        kept: Vec<bool>,
        levels: Vec<u32>,
        members: Vec<u32>,
        mass: f64,
    }
    let per_u: Vec<Local> = par::map_range(inst.u_count(), |u| {
        let nb = inst.nbrs(u);
        let mut order: Vec<(u32, u32, usize)> =
            nb.iter().enumerate().map(|(i, &v)| (inst.level[v as usize], v, i)).collect();
        order.sort_unstable();
        let mut local = Local { kept: vec![false; nb.len()], levels: Vec::new(), members: Vec::new(), mass: 0.0 };
        let mut start = 0;
        while start < order.len() {
            let j = order[start].0;
            let mut end = start;
            while end < order.len() && order[end].0 == j {
                end += 1;
            }
            let full = (end - start) / b * b;
            for (c, &(_, v, i)) in order[start..start + full].iter().enumerate() {
                local.kept[i] = true;
                local.members.push(v);
                if c % b == 0 {
                    local.levels.push(j);
                }
            }
            local.mass += full as f64 * pow2neg(j);
            start = end;
        }
        local
    });
    work.charge("hitting", 2 * inst.edge_count() as u64 + inst.u_count() as u64);
    let mut lb = LevelBuckets { b, ..Default::default() };
    lb.kept.reserve(inst.edge_count());
    for (u, local) in per_u.into_iter().enumerate() {
        lb.kept.extend_from_slice(&local.kept);
        lb.owner.extend(std::iter::repeat_n(u as u32, local.levels.len()));
        lb.level.extend_from_slice(&local.levels);
        lb.members.extend_from_slice(&local.members);
        lb.mass.push(local.mass);
    }
    lb.kept_count = lb.members.len();
    lb
}

/// `b = floor(min((1/γ)^β, γ 2^(K-1) / ceil(log N)))`.
pub(crate) fn low_bucket_size(gamma: f64, params: &ParamSet, n_bound: u64) -> Result<usize> {
    let k = params.big_k(n_bound);
    let a = (1.0 / gamma).powf(params.beta);
    let c = gamma * (k as f64 - 1.0).exp2() / params.log_n(n_bound) as f64;
    let b = a.min(c).floor();
    if !(b >= 2.0) {
        return Err(Error::Infeasible(format!(
            "bucket size {b} < 2 for gamma {gamma}, K {k}; N too small for these constants"
        )));
    }
    Ok(b.min(1e9) as usize)
}

/// Measured versions of the four guarantees of a low-probability halving.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HalfSlacks {
    /// `|E(H'')| + |S|` against `(2/3)(|E(H)| + |V|) + cap`.
    pub shrink_lhs: f64,
    pub shrink_rhs: f64,
    pub importance_fraction: f64,
    pub importance_required: f64,
    /// Largest number of trimmed neighbors of any `u`, against `γ 2^K`.
    pub max_dropped: u64,
    pub drop_allowance: f64,
    /// Largest distance of a good `u`'s retained probability mass outside
    /// `½(1±γ)Σ ± γ/2`; zero when every good node is inside.
    pub prob_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSampleResult {
    pub b: usize,
    pub eps: f64,
    /// Per instance edge: member of `H'`.
    pub kept_edge: Vec<bool>,
    pub u_good: Vec<bool>,
    pub selected: Vec<bool>,
    pub potential: f64,
    pub potential_bound: f64,
    pub readings: Vec<PotentialReading>,
    pub slacks: HalfSlacks,
}

/// One derandomized halving of a low-probability instance.
///
/// Builds the edge, importance and size potentials over level buckets,
/// rounds them, and reports `H'`, `U_good` and `S`.
pub fn low_prob_half(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<HalfSampleResult> {
    let b = low_bucket_size(gamma, params, inst.n_bound)?;
    let lb = level_buckets(inst, b, work);
    low_half_core(inst, gamma, params, &lb, Vec::new(), 0.1, 3.1, params.bad_node_exp, "low_half", work)
}

/// `Φ₁` (kept edges), `Φ₂` (importance-weighted probability mass) and `Φ₃`
/// (size of `S`), each with expectation 1 when nonempty.
pub(crate) fn standard_potentials(inst: &BipartiteInstance, lb: &LevelBuckets) -> Vec<Potential> {
    let (nu, nv) = (inst.u_count(), inst.v_count());
    let b = lb.b;
    let mut phi1 = Potential::new("phi1_edges", b);
    if lb.kept_count > 0 {
        let alpha = 4.0 / lb.kept_count as f64;
        for i in 0..lb.count() {
            phi1.push_bucket(lb.bucket(i), alpha);
        }
    }
    let mut phi2 = Potential::new("phi2_importance", b);
    let weighted = par::sum_f64(nu, |u| if lb.mass[u] > 0.0 { inst.imp[u] } else { 0.0 });
    if weighted > 0.0 {
        for i in 0..lb.count() {
            let u = lb.owner[i] as usize;
            if inst.imp[u] > 0.0 {
                let alpha = 4.0 * inst.imp[u] * pow2neg(lb.level[i]) / (weighted * lb.mass[u]);
                phi2.push_bucket(lb.bucket(i), alpha);
            }
        }
    }
    let mut phi3 = Potential::new("phi3_size", b);
    let full = nv / b;
    if full > 0 {
        let alpha = 4.0 / (b * full) as f64;
        let ids: Vec<u32> = (0..(full * b) as u32).collect();
        for chunk in ids.chunks(b) {
            phi3.push_bucket(chunk, alpha);
        }
    }
    vec![phi1, phi2, phi3]
}

/// The three potentials a low-probability halving with parameter `γ`
/// rounds.
pub fn low_half_potentials(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<Vec<Potential>> {
    let b = low_bucket_size(gamma, params, inst.n_bound)?;
    Ok(standard_potentials(inst, &level_buckets(inst, b, work)))
}

/// Shared body of the low-probability halvings. `extra` potentials are
/// added to the three standard ones; `slack` is the allowed excess over the
/// total expectation and `bound` the certified ceiling.
#[allow(clippy::too_many_arguments)]
pub(crate) fn low_half_core(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    lb: &LevelBuckets,
    extra: Vec<Potential>,
    slack: f64,
    bound: f64,
    bad_node_exp: f64,
    family: &str,
    work: &WorkCounter,
) -> Result<HalfSampleResult> {
    let big_k = params.big_k(inst.n_bound);
    if let Some(&k) = inst.level.iter().find(|&&k| k <= big_k) {
        return Err(contract(format!("low-probability halving needs levels above K = {big_k}, got {k}")));
    }
    let (nu, nv) = (inst.u_count(), inst.v_count());
    let b = lb.b;

    let mut potentials = standard_potentials(inst, lb);
    potentials.extend(extra);
    let rounded = round_potentials(nv, &potentials, slack, bound, family, work)?;
    let selected = rounded.selected;

    // Bad buckets and bad nodes.
    let threshold = (b as f64).powf(params.bad_bucket_exp);
    let bad_bucket: Vec<bool> = par::map_range(lb.count(), |i| {
        let hit = lb.bucket(i).iter().filter(|&&v| selected[v as usize]).count() as f64;
        (hit - b as f64 / 2.0).abs() >= threshold
    });
    let mut bad_mass = vec![0.0f64; nu];
    for i in 0..lb.count() {
        if bad_bucket[i] {
            bad_mass[lb.owner[i] as usize] += b as f64 * pow2neg(lb.level[i]);
        }
    }
    let limit = (b as f64).powf(bad_node_exp);
    let u_good: Vec<bool> = (0..nu).map(|u| bad_mass[u] <= lb.mass[u] / limit).collect();
    work.charge("hitting", (lb.members.len() + nu) as u64);

    let slacks = low_slacks(inst, gamma, params, lb, &selected, &u_good);
    let ok = slacks.shrink_lhs <= slacks.shrink_rhs;
    record_shrinkage(ok);
    if !ok {
        return Err(Error::Certificate(format!(
            "shrinkage {} above {}",
            slacks.shrink_lhs, slacks.shrink_rhs
        )));
    }
    Ok(HalfSampleResult {
        b,
        eps: rounded.eps,
        kept_edge: lb.kept.clone(),
        u_good,
        selected,
        potential: rounded.value,
        potential_bound: rounded.bound,
        readings: rounded.readings,
        slacks,
    })
}

fn low_slacks(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    lb: &LevelBuckets,
    selected: &[bool],
    u_good: &[bool],
) -> HalfSlacks {
    let nu = inst.u_count();
    let in_h2 = |u: usize, i: usize| u_good[u] && lb.kept[i] && selected[inst.u_adj[i] as usize];
    let edges_h2 = par::sum_u64(nu, |u| inst.range(u).filter(|&i| in_h2(u, i)).count() as u64);
    let s_size = selected.iter().filter(|&&s| s).count();
    let total = inst.total_importance();
    let good = par::sum_f64(nu, |u| if u_good[u] { inst.imp[u] } else { 0.0 });
    let max_dropped = (0..nu)
        .map(|u| inst.range(u).filter(|&i| !lb.kept[i]).count() as u64)
        .max()
        .unwrap_or(0);
    let violations: Vec<f64> = par::map_range(nu, |u| {
        if !u_good[u] {
            return 0.0;
        }
        let mut before = 0.0;
        let mut after = 0.0;
        for i in inst.range(u) {
            let p = pow2neg(inst.level[inst.u_adj[i] as usize]);
            before += p;
            if in_h2(u, i) {
                after += p;
            }
        }
        let lo = 0.5 * (1.0 - gamma) * before - gamma / 2.0;
        let hi = 0.5 * (1.0 + gamma) * before + gamma / 2.0;
        (lo - after).max(after - hi).max(0.0)
    });
    HalfSlacks {
        shrink_lhs: (edges_h2 + s_size as u64) as f64,
        shrink_rhs: 2.0 / 3.0 * (inst.edge_count() + inst.v_count()) as f64 + params.additive_cap(inst.n_bound),
        importance_fraction: if total > 0.0 { good / total } else { 1.0 },
        importance_required: 1.0 - gamma,
        max_dropped,
        drop_allowance: gamma * (params.big_k(inst.n_bound) as f64).exp2(),
        prob_violation: violations.into_iter().fold(0.0, f64::max),
    }
}

/// Iterated halving of all nodes above level `K` down to level `K`.
///
/// Round `i` halves the nodes at current level `k_v - i`; nodes whose level
/// reaches `K` freeze and form the output. Between rounds the instance is
/// restricted to `H''`: trimmed edges, bad `u` and unselected `v` are gone.
pub fn low_prob_regime(inst: &BipartiteInstance, params: &ParamSet, work: &WorkCounter) -> Result<HittingResult> {
    inst.validate()?;
    let (selected, u_good, rounds) = low_regime_with(inst, params, work, |cur, round| {
        low_prob_half(cur, round.gamma, params, work)
    })?;
    Ok(HittingResult::from_selection(inst, selected, u_good, rounds))
}

/// State handed to the per-round halving of the low regime.
pub(crate) struct LowRound<'a> {
    pub gamma: f64,
    /// Current `V` ids to `inst` ids.
    pub v_map: &'a [u32],
    /// Nodes of `inst` already frozen at level `K`.
    pub fixed: &'a [bool],
}

/// Round loop shared with the MIS variant. `half` receives the current
/// instance and the round state.
pub(crate) fn low_regime_with<F>(
    inst: &BipartiteInstance,
    params: &ParamSet,
    work: &WorkCounter,
    mut half: F,
) -> Result<(Vec<bool>, Vec<bool>, usize)>
where
    F: FnMut(&BipartiteInstance, &LowRound) -> Result<HalfSampleResult>,
{
    let big_k = params.big_k(inst.n_bound);
    let (nu, nv) = (inst.u_count(), inst.v_count());
    if let Some(&k) = inst.level.iter().find(|&&k| k <= big_k) {
        return Err(contract(format!("low-probability regime needs levels above K = {big_k}, got {k}")));
    }
    let mut fixed = vec![false; nv];
    let mut cur = inst.clone();
    let mut u_map: Vec<u32> = (0..nu as u32).collect();
    let mut v_map: Vec<u32> = (0..nv as u32).collect();
    let rounds = params.log_n(inst.n_bound) as usize;
    let mut used = 0;
    for i in 0..=rounds {
        if cur.v_count() == 0 {
            break;
        }
        let gamma = params.low_gamma(i as u32, inst.n_bound);
        let state = LowRound { gamma, v_map: &v_map, fixed: &fixed };
        let res = half(&cur, &state)?;
        used += 1;
        let mut keep_v = res.selected.clone();
        for (x, &v) in v_map.iter().enumerate() {
            if res.selected[x] && cur.level[x] - 1 == big_k {
                fixed[v as usize] = true;
                keep_v[x] = false;
            }
        }
        let level: Vec<u32> = cur.level.iter().map(|&k| k - 1).collect();
        let (next, nu_map, nv_map) = cur.restrict(&res.u_good, &keep_v, Some(&res.kept_edge), &level, work)?;
        u_map = nu_map.iter().map(|&x| u_map[x as usize]).collect();
        v_map = nv_map.iter().map(|&x| v_map[x as usize]).collect();
        cur = next;
    }
    let mut u_good = vec![false; nu];
    for &u in &u_map {
        u_good[u as usize] = true;
    }
    Ok((fixed, u_good, used))
}
