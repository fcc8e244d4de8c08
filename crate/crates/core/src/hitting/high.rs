//! Halving rounds for nodes with sampling probability at least `2^-K`.

use serde::{Deserialize, Serialize};

use super::instance::BipartiteInstance;
use super::potential::{round_potentials, Potential, PotentialReading};
use super::HittingResult;
use crate::error::{Error, Result};
use crate::par;
use crate::params::ParamSet;
use crate::work::WorkCounter;

/// Per-`u` neighborhoods (by id) trimmed to multiples of `b` and cut into
/// consecutive buckets.
#[derive(Clone, Debug, Default)]
pub(crate) struct TrimmedBuckets {
    pub b: usize,
    pub owner: Vec<u32>,
    pub members: Vec<u32>,
    /// Per `u`: trimmed neighborhood size.
    pub trimmed: Vec<usize>,
}

impl TrimmedBuckets {
    pub fn bucket(&self, i: usize) -> &[u32] {
        &self.members[i * self.b..(i + 1) * self.b]
    }

    pub fn count(&self) -> usize {
        self.owner.len()
    }
}

pub(crate) fn trimmed_buckets(inst: &BipartiteInstance, b: usize, work: &WorkCounter) -> TrimmedBuckets {
    let trimmed: Vec<usize> = (0..inst.u_count()).map(|u| inst.nbrs(u).len() / b * b).collect();
    let mut tb = TrimmedBuckets { b, ..Default::default() };
    for (u, &t) in trimmed.iter().enumerate() {
        tb.members.extend_from_slice(&inst.nbrs(u)[..t]);
        tb.owner.extend(std::iter::repeat_n(u as u32, t / b));
    }
    tb.trimmed = trimmed;
    work.charge("hitting", (inst.edge_count() + inst.u_count()) as u64);
    tb
}

/// `b = ceil((1/γ)^β)`.
pub(crate) fn high_bucket_size(gamma: f64, params: &ParamSet) -> Result<usize> {
    let b = (1.0 / gamma).powf(params.beta).ceil();
    if !(b >= 2.0) {
        return Err(Error::Infeasible(format!("bucket size {b} < 2 for gamma {gamma}")));
    }
    Ok(b.min(1e9) as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighHalfResult {
    pub b: usize,
    pub eps: f64,
    pub selected: Vec<bool>,
    pub u_good: Vec<bool>,
    pub potential: f64,
    pub potential_bound: f64,
    pub readings: Vec<PotentialReading>,
    pub importance_fraction: f64,
    /// Largest distance of a good `u`'s hit count outside
    /// `(1±γ)|N(u)|/2 ± (1/γ)^(β+1)`; zero when all are inside.
    pub hit_violation: f64,
}

/// One derandomized halving of `V`, keeping `|N(u) ∩ S| ≈ |N(u)|/2` for
/// nearly all importance.
pub fn high_prob_half(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<HighHalfResult> {
    let b = high_bucket_size(gamma, params)?;
    let tb = trimmed_buckets(inst, b, work);
    let total = inst.total_importance();
    let expectation = par::sum_f64(inst.u_count(), |u| if tb.trimmed[u] > 0 { inst.imp[u] / 4.0 } else { 0.0 });
    high_half_core(inst, gamma, params, &tb, 1.0, Vec::new(), expectation, total / 2.0, params.bad_node_exp, "high_half", work)
}

pub(crate) fn bucket_potential(inst: &BipartiteInstance, tb: &TrimmedBuckets, scale: f64) -> Potential {
    let mut phi = Potential::new("phi_high", tb.b);
    for i in 0..tb.count() {
        let u = tb.owner[i] as usize;
        if inst.imp[u] > 0.0 {
            phi.push_bucket(tb.bucket(i), scale * inst.imp[u] / tb.trimmed[u] as f64);
        }
    }
    phi
}

/// The bucket potential a high-probability halving with parameter `γ`
/// rounds; its expectation is a quarter of the bucketed importance.
pub fn high_half_potential(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<Potential> {
    let b = high_bucket_size(gamma, params)?;
    Ok(bucket_potential(inst, &trimmed_buckets(inst, b, work), 1.0))
}

/// Shared body of the high-probability halvings. The bucket potential is
/// `scale · Σ_u imp_u/T_u Σ_i (|S∩B_i(u)| − b/2)²`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn high_half_core(
    inst: &BipartiteInstance,
    gamma: f64,
    params: &ParamSet,
    tb: &TrimmedBuckets,
    scale: f64,
    extra: Vec<Potential>,
    slack: f64,
    bound: f64,
    bad_node_exp: f64,
    family: &str,
    work: &WorkCounter,
) -> Result<HighHalfResult> {
    let (nu, nv) = (inst.u_count(), inst.v_count());
    let b = tb.b;
    let mut potentials = vec![bucket_potential(inst, tb, scale)];
    potentials.extend(extra);
    let rounded = round_potentials(nv, &potentials, slack, bound, family, work)?;
    let selected = rounded.selected;

    let threshold = (b as f64).powf(params.bad_bucket_exp);
    let bad_bucket: Vec<bool> = par::map_range(tb.count(), |i| {
        let hit = tb.bucket(i).iter().filter(|&&v| selected[v as usize]).count() as f64;
        (hit - b as f64 / 2.0).abs() >= threshold
    });
    let mut bad = vec![0usize; nu];
    for i in 0..tb.count() {
        if bad_bucket[i] {
            bad[tb.owner[i] as usize] += 1;
        }
    }
    let limit = (b as f64).powf(-bad_node_exp);
    let u_good: Vec<bool> = (0..nu)
        .map(|u| {
            let buckets = tb.trimmed[u] / b;
            buckets == 0 || (bad[u] as f64) <= limit * buckets as f64
        })
        .collect();
    work.charge("hitting", (tb.members.len() + nu) as u64);

    let total = inst.total_importance();
    let good = par::sum_f64(nu, |u| if u_good[u] { inst.imp[u] } else { 0.0 });
    let additive = (1.0 / gamma).powf(params.beta + 1.0);
    let violations: Vec<f64> = par::map_range(nu, |u| {
        if !u_good[u] {
            return 0.0;
        }
        let d = inst.nbrs(u).len() as f64;
        let hit = inst.nbrs(u).iter().filter(|&&v| selected[v as usize]).count() as f64;
        let lo = (1.0 - gamma) * d / 2.0 - additive;
        let hi = (1.0 + gamma) * d / 2.0 + additive;
        (lo - hit).max(hit - hi).max(0.0)
    });
    Ok(HighHalfResult {
        b,
        eps: rounded.eps,
        selected,
        u_good,
        potential: rounded.value,
        potential_bound: rounded.bound,
        readings: rounded.readings,
        importance_fraction: if total > 0.0 { good / total } else { 1.0 },
        hit_violation: violations.into_iter().fold(0.0, f64::max),
    })
}

/// Iterated halving for levels in `0..=K`.
///
/// Round `i` runs for `i = 0..=K - floor` and halves the alive nodes with
/// `k_v ≥ K - i`; unselected ones die. Nodes below the floor are never
/// sampled. The output is the alive set.
pub fn high_prob_regime(inst: &BipartiteInstance, params: &ParamSet, work: &WorkCounter) -> Result<HittingResult> {
    inst.validate()?;
    let floor = params.high_floor_hitting;
    let (alive, u_good, rounds) = high_regime_with(inst, params, floor, work, |sub, round| {
        let res = high_prob_half(sub, round.gamma, params, work)?;
        Ok((res.selected, res.u_good))
    })?;
    Ok(HittingResult::from_selection(inst, alive, u_good, rounds))
}

/// State handed to the per-round halving of the high regime.
pub(crate) struct HighRound<'a> {
    pub round: u32,
    pub big_k: u32,
    pub gamma: f64,
    /// Round instance ids to `inst` ids.
    pub u_map: &'a [u32],
    pub v_map: &'a [u32],
    /// Alive nodes of `inst` before this round.
    pub alive: &'a [bool],
}

/// Round loop shared with the MIS variant. `half` receives the round's
/// instance and state, and returns the selection and good set on that
/// instance.
pub(crate) fn high_regime_with<F>(
    inst: &BipartiteInstance,
    params: &ParamSet,
    floor: u32,
    work: &WorkCounter,
    mut half: F,
) -> Result<(Vec<bool>, Vec<bool>, usize)>
where
    F: FnMut(&BipartiteInstance, &HighRound) -> Result<(Vec<bool>, Vec<bool>)>,
{
    let big_k = params.big_k(inst.n_bound);
    let (nu, nv) = (inst.u_count(), inst.v_count());
    if let Some(&k) = inst.level.iter().find(|&&k| k > big_k) {
        return Err(crate::error::contract(format!("high-probability regime needs levels at most K = {big_k}, got {k}")));
    }
    let mut alive = vec![true; nv];
    let mut u_cur = vec![true; nu];
    let mut used = 0;
    if big_k < floor {
        return Ok((alive, u_cur, 0));
    }
    // V sorted by level descending, so each round's set is a growing prefix.
    let mut by_level: Vec<u32> = (0..nv as u32).collect();
    by_level.sort_by_key(|&v| (std::cmp::Reverse(inst.level[v as usize]), v));
    let mut prefix = 0;
    let mut active = vec![false; nv];
    for i in 0..=(big_k - floor) {
        let top = big_k - i;
        while prefix < nv && inst.level[by_level[prefix] as usize] >= top {
            active[by_level[prefix] as usize] = true;
            prefix += 1;
        }
        let round_v: Vec<bool> = (0..nv).map(|v| active[v] && alive[v]).collect();
        work.charge("hitting", nv as u64);
        if !round_v.iter().any(|&x| x) {
            continue;
        }
        let gamma = params.high_gamma(i, big_k);
        let (sub, u_map, v_map) = inst.restrict(&u_cur, &round_v, None, &inst.level, work)?;
        let state = HighRound { round: i, big_k, gamma, u_map: &u_map, v_map: &v_map, alive: &alive };
        let (selected, good) = half(&sub, &state)?;
        used += 1;
        for (x, &v) in v_map.iter().enumerate() {
            if !selected[x] {
                alive[v as usize] = false;
            }
        }
        let mut next = vec![false; nu];
        for (x, &u) in u_map.iter().enumerate() {
            next[u as usize] = good[x];
        }
        u_cur = next;
    }
    Ok((alive, u_cur, used))
}

/// Level bookkeeping: `min(k_v, K - i)` for alive nodes in round `i`.
pub fn current_level(k: u32, big_k: u32, round: u32) -> u32 {
    k.min(big_k.saturating_sub(round))
}

