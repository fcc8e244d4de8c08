//! Maximal independent set.
//!
//! The deterministic algorithm repeats: mark an independentish set `S*` of
//! bounded out-degree, color `G[S*]`, keep the best color class (extended
//! greedily by the others), and remove it with its neighborhood. Marking is
//! a hitting-set computation whose potentials also keep the weight of edges
//! inside the marked set small, measured on an auxiliary weighted graph.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::color_delta_squared;
use crate::error::{contract, malformed, Error, Result};
use crate::graph::{compact_subgraph, induced_subgraph, sort_weighted_edges_to_csr, Graph};
use crate::hitting::{
    bucket_potential, standard_potentials, high_bucket_size, high_half_core, high_regime_with, level_buckets, low_bucket_size, low_half_core,
    low_regime_with, pow2neg, trimmed_buckets, BipartiteInstance, HalfSampleResult, HighHalfResult, HittingResult,
    Potential,
};
use crate::par;
use crate::params::{Mode, ParamSet};
use crate::scan::{ceil_log2, radix_sort_u64};
use crate::work::WorkCounter;

// ---------------------------------------------------------------------------
// Edge buckets

/// Edges grouped into buckets of exactly `b`, each edge with a special
/// endpoint; specials within a bucket are distinct.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeBucketing {
    pub b: usize,
    /// `(special, other)` endpoint pairs, `b` per bucket.
    pub edges: Vec<(u32, u32)>,
    pub leftover: Vec<(u32, u32)>,
}

impl EdgeBucketing {
    pub fn count(&self) -> usize {
        self.edges.len().checked_div(self.b).unwrap_or(0)
    }

    pub fn bucket(&self, i: usize) -> &[(u32, u32)] {
        &self.edges[i * self.b..(i + 1) * self.b]
    }

    pub fn specials(&self, i: usize) -> Vec<u32> {
        self.bucket(i).iter().map(|e| e.0).collect()
    }

    /// `b³`
    pub fn leftover_cap(&self) -> usize {
        self.b.saturating_pow(3)
    }
}

/// Bucket the edges of `g` into groups of `b`.
///
/// While some node has at least `b` remaining edges, every such node cuts
/// the edges it owns into buckets whose special endpoints are the other
/// sides; an edge is owned by its lower-id endpoint among those of high
/// degree. Afterwards every edge belongs to its lower-id endpoint, nodes are
/// sorted by owned degree and grouped `b` at a time, and bucket `i` of a
/// group takes the `i`-th owned edge of each member, special being the
/// member. Incomplete groups are left over.
pub fn edge_buckets(g: &Graph, b: usize, work: &WorkCounter) -> Result<EdgeBucketing> {
    if b == 0 {
        return Err(contract("bucket size must be positive"));
    }
    let n = g.node_count();
    let nn = (n as u64).max(1);
    let mut out = EdgeBucketing { b, ..Default::default() };
    let mut remaining: Vec<(u32, u32)> = g.edges().into_iter().map(|(u, v, _)| (u, v)).collect();
    let mut deg = vec![0usize; n];
    loop {
        deg.fill(0);
        for &(u, v) in &remaining {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        work.charge("edge_buckets", (n + remaining.len()) as u64);
        if !deg.iter().any(|&d| d >= b) {
            break;
        }
        let mut owned: Vec<(u64, u32)> = Vec::new();
        let mut rest = Vec::new();
        for &(u, v) in &remaining {
            if deg[u as usize] >= b {
                owned.push((u as u64 * nn + v as u64, 0));
            } else if deg[v as usize] >= b {
                owned.push((v as u64 * nn + u as u64, 0));
            } else {
                rest.push((u, v));
            }
        }
        radix_sort_u64(&mut owned, work);
        let mut i = 0;
        while i < owned.len() {
            let o = owned[i].0 / nn;
            let mut j = i;
            while j < owned.len() && owned[j].0 / nn == o {
                j += 1;
            }
            let full = (j - i) / b * b;
            for &(key, _) in &owned[i..i + full] {
                out.edges.push(((key % nn) as u32, o as u32));
            }
            for &(key, _) in &owned[i + full..j] {
                let (a, c) = (o as u32, (key % nn) as u32);
                rest.push((a.min(c), a.max(c)));
            }
            i = j;
        }
        remaining = rest;
    }

    // Every node now has fewer than b remaining edges.
    let mut own: Vec<(u64, u32)> = remaining.iter().map(|&(u, v)| (u as u64 * nn + v as u64, 0)).collect();
    radix_sort_u64(&mut own, work);
    let mut start = vec![usize::MAX; n];
    let mut count = vec![0usize; n];
    for (i, &(key, _)) in own.iter().enumerate() {
        let u = (key / nn) as usize;
        if count[u] == 0 {
            start[u] = i;
        }
        count[u] += 1;
    }
    let mut nodes: Vec<(u64, u32)> =
        (0..n).filter(|&v| count[v] > 0).map(|v| (count[v] as u64 * nn + v as u64, v as u32)).collect();
    radix_sort_u64(&mut nodes, work);
    let other = |v: usize, i: usize| (own[start[v] + i].0 % nn) as u32;
    let mut i = 0;
    while i < nodes.len() {
        let c = count[nodes[i].1 as usize];
        let mut j = i;
        while j < nodes.len() && count[nodes[j].1 as usize] == c {
            j += 1;
        }
        for chunk in nodes[i..j].chunks(b) {
            if chunk.len() == b {
                for k in 0..c {
                    for &(_, m) in chunk {
                        out.edges.push((m, other(m as usize, k)));
                    }
                }
            } else {
                for &(_, m) in chunk {
                    for k in 0..c {
                        out.leftover.push((m, other(m as usize, k)));
                    }
                }
            }
        }
        i = j;
    }
    work.charge("edge_buckets", (n + 2 * remaining.len()) as u64);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Auxiliary weights

/// Hitting instance plus the auxiliary graph `G'` on its `V` side.
#[derive(Clone, Debug, PartialEq)]
pub struct MisAuxInstance {
    pub core: BipartiteInstance,
    /// Edge weights `w(e')`; an unweighted graph has unit weights.
    pub aux: Graph,
    pub vertex_weight: Vec<f64>,
}

impl MisAuxInstance {
    pub fn new(core: BipartiteInstance, aux: Graph, vertex_weight: Vec<f64>) -> Result<Self> {
        let inst = MisAuxInstance { core, aux, vertex_weight };
        inst.validate()?;
        Ok(inst)
    }

    /// Empty `G'` and zero vertex weights.
    pub fn bare(core: BipartiteInstance) -> Self {
        let nv = core.v_count();
        MisAuxInstance { core, aux: Graph::empty(nv), vertex_weight: vec![0.0; nv] }
    }

    pub fn validate(&self) -> Result<()> {
        self.core.validate()?;
        self.aux.validate()?;
        let nv = self.core.v_count();
        if self.aux.node_count() != nv || self.vertex_weight.len() != nv {
            return Err(malformed("auxiliary graph and vertex weights must cover V"));
        }
        if self.vertex_weight.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(malformed("vertex weights must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// The weighted auxiliary bound of one halving:
/// `4 Σ_{S²} w(e') + 2 Σ_S w(v) ≤ (1+γ)(Σ w(e') + Σ w(v))`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuxCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `|E' ∩ S²|` and `|E'|`.
    pub edges_selected: u64,
    pub edges_total: u64,
    /// `(2/3)|E'| + cap` for the low-probability halving.
    pub edge_cap: Option<f64>,
}

impl AuxCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-9 * self.rhs.abs()
    }

    pub fn edge_cap_holds(&self) -> bool {
        self.edge_cap.is_none_or(|c| self.edges_selected as f64 <= c)
    }
}

static AUX_CHECKS: AtomicU64 = AtomicU64::new(0);
static AUX_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide `(checks, violations)` of the auxiliary weight bound.
pub fn aux_audit() -> (u64, u64) {
    (AUX_CHECKS.load(Ordering::SeqCst), AUX_VIOLATIONS.load(Ordering::SeqCst))
}

/// `(Σ_{S²} w(e'), Σ_S w(v), |E' ∩ S²|)`.
fn aux_selected(aux: &Graph, vw: &[f64], sel: &[bool]) -> (f64, f64, u64) {
    let inside = |v: usize, i: usize| {
        let x = aux.adjacency()[i] as usize;
        x > v && sel[x]
    };
    let pairs = par::sum_f64(aux.node_count(), |v| {
        if !sel[v] {
            return 0.0;
        }
        aux.entry_range(v).filter(|&i| inside(v, i)).map(|i| aux.weight_at(i)).sum()
    });
    let count = par::sum_u64(aux.node_count(), |v| {
        if sel[v] {
            aux.entry_range(v).filter(|&i| inside(v, i)).count() as u64
        } else {
            0
        }
    });
    let verts = par::sum_f64(vw.len(), |v| if sel[v] { vw[v] } else { 0.0 });
    (pairs, verts, count)
}

/// `Σ w(e') 2^-(l_a + l_c)` and `Σ w(v) 2^-l_v`.
fn aux_reference(aux: &Graph, vw: &[f64], level: &[u32]) -> (f64, f64) {
    let edges = par::sum_f64(aux.node_count(), |v| {
        aux.entry_range(v)
            .filter(|&i| aux.adjacency()[i] as usize > v)
            .map(|i| aux.weight_at(i) * pow2neg(level[v] + level[aux.adjacency()[i] as usize]))
            .sum()
    });
    let verts = par::sum_f64(vw.len(), |v| vw[v] * pow2neg(level[v]));
    (edges, verts)
}

fn check_aux(aux: &Graph, vw: &[f64], sel: &[bool], gamma: f64, edge_cap: Option<f64>) -> Result<AuxCheck> {
    let (pairs, verts, count) = aux_selected(aux, vw, sel);
    let total = aux.total_weight() + par::sum_f64(vw.len(), |v| vw[v]);
    let check = AuxCheck {
        lhs: 4.0 * pairs + 2.0 * verts,
        rhs: (1.0 + gamma) * total,
        edges_selected: count,
        edges_total: aux.edge_count() as u64,
        edge_cap,
    };
    AUX_CHECKS.fetch_add(1, Ordering::SeqCst);
    if !check.holds() {
        AUX_VIOLATIONS.fetch_add(1, Ordering::SeqCst);
        return Err(Error::Certificate(format!("aux weight {} above {}", check.lhs, check.rhs)));
    }
    Ok(check)
}

/// `scale · (4 Σ_{S²} w(e') + 2 Σ_S w(v)) / T` with `T = Σ w(e') + Σ w(v)`;
/// its expectation is `scale`.
fn aux_potential(name: &'static str, aux: &Graph, vw: &[f64], scale: f64) -> Potential {
    let mut p = Potential::new(name, 2);
    let total = aux.total_weight() + par::sum_f64(vw.len(), |v| vw[v]);
    if !(total > 0.0) {
        return p;
    }
    for (v, &w) in vw.iter().enumerate() {
        if w > 0.0 {
            p.linear.push((v as u32, scale * 2.0 * w / total));
        }
    }
    for (a, c, w) in aux.edges() {
        if w > 0.0 {
            p.pairs.push((a, c, scale * 4.0 * w / total));
        }
    }
    p
}

/// Auxiliary graph of one round on `members` (ascending ids of `aux`).
/// Edge weights are scaled by `2^-(l_a + l_c)` for current levels `l`;
/// edges to non-member neighbors accepted by `outside` fold into the vertex
/// weights, as does `vw(v) 2^-l_v`.
fn round_aux<L, O>(
    aux: &Graph,
    vw: &[f64],
    members: &[u32],
    level: L,
    outside: O,
    work: &WorkCounter,
) -> Result<(Graph, Vec<f64>)>
where
    L: Fn(usize) -> u32 + Sync + Send,
    O: Fn(usize) -> bool + Sync + Send,
{
    let local: Vec<(Vec<(u32, u32, f64)>, f64)> = par::map_range(members.len(), |i| {
        let v = members[i] as usize;
        let lv = level(v);
        let mut edges = Vec::new();
        let mut weight = vw[v] * pow2neg(lv);
        for e in aux.entry_range(v) {
            let w = aux.weight_at(e);
            if w == 0.0 {
                continue;
            }
            let x = aux.adjacency()[e] as usize;
            match members.binary_search(&(x as u32)) {
                Ok(j) => {
                    if j > i {
                        edges.push((i as u32, j as u32, w * pow2neg(lv + level(x))));
                    }
                }
                Err(_) => {
                    if outside(x) {
                        weight += w * pow2neg(lv + level(x));
                    }
                }
            }
        }
        (edges, weight)
    });
    let touched = par::sum_u64(members.len(), |i| aux.degree(members[i] as usize) as u64);
    work.charge("mis_aux", members.len() as u64 + touched);
    let mut edges = Vec::new();
    let mut weights = Vec::with_capacity(members.len());
    for (e, w) in local {
        edges.extend(e);
        weights.push(w);
    }
    let g = sort_weighted_edges_to_csr(&edges, members.len(), work)?;
    Ok((g, weights))
}

// ---------------------------------------------------------------------------
// Halvings

/// `Φ₄` over the edge buckets of `G'` (special endpoints) and `Φ₅`, the
/// auxiliary weight scaled by `100/γ`.
fn aux_low_potentials(aux: &Graph, vw: &[f64], b: usize, gamma: f64, work: &WorkCounter) -> Result<[Potential; 2]> {
    let eb = edge_buckets(aux, b, work)?;
    let mut phi4 = Potential::new("phi4_aux_edges", b);
    if eb.count() > 0 {
        let alpha = 4.0 / (b * eb.count()) as f64;
        for i in 0..eb.count() {
            phi4.push_bucket(&eb.specials(i), alpha);
        }
    }
    Ok([phi4, aux_potential("phi5_aux_weight", aux, vw, 100.0 / gamma)])
}

/// The five potentials of the auxiliary low-probability halving.
pub fn mis_low_half_potentials(
    inst: &MisAuxInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<Vec<Potential>> {
    inst.validate()?;
    let b = low_bucket_size(gamma, params, inst.core.n_bound)?;
    let mut out = standard_potentials(&inst.core, &level_buckets(&inst.core, b, work));
    out.extend(aux_low_potentials(&inst.aux, &inst.vertex_weight, b, gamma, work)?);
    Ok(out)
}

/// The two potentials of the auxiliary high-probability halving.
pub fn mis_high_half_potentials(
    inst: &MisAuxInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<Vec<Potential>> {
    inst.validate()?;
    let b = high_bucket_size(gamma, params)?;
    let core = &inst.core;
    let total = core.total_importance();
    let scale = if total > 0.0 { 4.0 / total } else { 0.0 };
    Ok(vec![
        bucket_potential(core, &trimmed_buckets(core, b, work), scale),
        aux_potential("phi2_aux_weight", &inst.aux, &inst.vertex_weight, 10.0 / gamma),
    ])
}

fn low_half_aux(
    core: &BipartiteInstance,
    aux: &Graph,
    vw: &[f64],
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<(HalfSampleResult, AuxCheck)> {
    let b = low_bucket_size(gamma, params, core.n_bound)?;
    let lb = level_buckets(core, b, work);
    let [phi4, phi5] = aux_low_potentials(aux, vw, b, gamma, work)?;
    // Without auxiliary terms this is the plain halving.
    let bare = phi4.bucket_count() == 0 && phi5.linear.is_empty() && phi5.pairs.is_empty();
    let (slack, bound) = if bare { (0.1, 3.1) } else { (1.0, 5.0 + 100.0 / gamma) };
    let half = low_half_core(
        core,
        gamma,
        params,
        &lb,
        vec![phi4, phi5],
        slack,
        bound,
        params.bad_node_exp_mis,
        "mis_low_half",
        work,
    )?;
    let cap = 2.0 / 3.0 * aux.edge_count() as f64 + params.additive_cap(core.n_bound);
    let check = check_aux(aux, vw, &half.selected, gamma, Some(cap))?;
    Ok((half, check))
}

fn high_half_aux(
    core: &BipartiteInstance,
    aux: &Graph,
    vw: &[f64],
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<(HighHalfResult, AuxCheck)> {
    let b = high_bucket_size(gamma, params)?;
    let tb = trimmed_buckets(core, b, work);
    let total = core.total_importance();
    let scale = if total > 0.0 { 4.0 / total } else { 0.0 };
    let phi2 = aux_potential("phi2_aux_weight", aux, vw, 10.0 / gamma);
    let half = high_half_core(
        core,
        gamma,
        params,
        &tb,
        scale,
        vec![phi2],
        2.0,
        3.0 + 10.0 / gamma,
        params.bad_node_exp_mis,
        "mis_high_half",
        work,
    )?;
    let check = check_aux(aux, vw, &half.selected, gamma, None)?;
    Ok((half, check))
}

/// Low-probability halving with the auxiliary edge-bucket and weight
/// potentials added.
pub fn mis_low_prob_half(
    inst: &MisAuxInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<(HalfSampleResult, AuxCheck)> {
    inst.validate()?;
    low_half_aux(&inst.core, &inst.aux, &inst.vertex_weight, gamma, params, work)
}

/// High-probability halving with the importance potential normalized by
/// `Σ imp` and the auxiliary weight potential added.
pub fn mis_high_prob_half(
    inst: &MisAuxInstance,
    gamma: f64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<(HighHalfResult, AuxCheck)> {
    inst.validate()?;
    high_half_aux(&inst.core, &inst.aux, &inst.vertex_weight, gamma, params, work)
}

// ---------------------------------------------------------------------------
// Regimes

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisRegimeResult {
    pub hitting: HittingResult,
    /// One auxiliary check per halving.
    pub rounds: Vec<AuxCheck>,
    /// Left side of the regime's final weighted bound.
    pub aux_selected: f64,
    /// `Σ w(e') 2^-(k_v + k_v') + Σ w(v) 2^-k_v`.
    pub aux_reference: f64,
    /// Low regime: largest `|hits·2^-K − Σ 2^-k|` over good `u`.
    /// High regime: largest `Σ 2^-k − 0.1 − hits` over good `u`, at least 0.
    pub deviation: f64,
    /// Largest alive probability mass `Σ 2^-k` of a live `u` seen in any
    /// round (high regime).
    pub max_prob_sum: f64,
}

impl MisRegimeResult {
    pub fn aux_ratio(&self) -> f64 {
        if self.aux_reference > 0.0 {
            self.aux_selected / self.aux_reference
        } else {
            0.0
        }
    }
}

fn low_regime_aux(
    core: &BipartiteInstance,
    aux: &Graph,
    vw: &[f64],
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<MisRegimeResult> {
    let big_k = params.big_k(core.n_bound);
    let mut checks = Vec::new();
    let (selected, u_good, rounds) = low_regime_with(core, params, work, |cur, round| {
        let level = |v: usize| match round.v_map.binary_search(&(v as u32)) {
            Ok(j) => cur.level[j],
            Err(_) => big_k,
        };
        let (g, w) = round_aux(aux, vw, round.v_map, level, |x| round.fixed[x], work)?;
        let (half, check) = low_half_aux(cur, &g, &w, round.gamma, params, work)?;
        checks.push(check);
        Ok(half)
    })?;
    let hitting = HittingResult::from_selection(core, selected, u_good, rounds);
    let scale = pow2neg(big_k);
    let deviation = (0..core.u_count())
        .filter(|&u| hitting.u_good[u])
        .map(|u| (hitting.hits[u] as f64 * scale - hitting.targets[u]).abs())
        .fold(0.0, f64::max);
    let (pairs, verts, _) = aux_selected(aux, vw, &hitting.selected);
    let (re, rv) = aux_reference(aux, vw, &core.level);
    Ok(MisRegimeResult {
        hitting,
        rounds: checks,
        aux_selected: pairs * scale * scale + verts * scale,
        aux_reference: re + rv,
        deviation,
        max_prob_sum: 0.0,
    })
}

fn high_regime_aux(
    core: &BipartiteInstance,
    aux: &Graph,
    vw: &[f64],
    params: &ParamSet,
    enforce: bool,
    work: &WorkCounter,
) -> Result<MisRegimeResult> {
    let floor = params.high_floor_mis;
    let start = core.probability_sums().into_iter().fold(0.0, f64::max);
    if enforce && start > 40.0 + 1e-9 {
        return Err(contract(format!("probability sum {start} above 40")));
    }
    // Edges between two nodes below the floor never meet a round.
    let keep_edge: Vec<bool> = par::map_range(aux.adjacency().len(), |i| {
        let (a, c) = (aux.owner_of(i), aux.adjacency()[i] as usize);
        aux.weight_at(i) > 0.0 && core.level[a].max(core.level[c]) >= floor
    });
    let (relevant, _, _) = compact_subgraph(aux, &vec![true; aux.node_count()], &keep_edge, work)?;
    let mut checks = Vec::new();
    let mut max_sum = start;
    let (alive, u_good, rounds) = high_regime_with(core, params, floor, work, |sub, round| {
        let top = round.big_k - round.round;
        let level = |v: usize| core.level[v].min(top);
        let mass = par::map_slice(round.u_map, |&u| {
            core.nbrs(u as usize)
                .iter()
                .filter(|&&v| round.alive[v as usize])
                .map(|&v| pow2neg(level(v as usize)))
                .sum::<f64>()
        });
        let touched = par::sum_u64(round.u_map.len(), |i| core.nbrs(round.u_map[i] as usize).len() as u64);
        work.charge("mis_aux", touched + round.u_map.len() as u64);
        let s = mass.into_iter().fold(0.0, f64::max);
        max_sum = max_sum.max(s);
        if enforce && s > 45.0 + 1e-9 {
            return Err(contract(format!("alive probability sum {s} above 45 in round {}", round.round)));
        }
        let (g, w) = round_aux(&relevant, vw, round.v_map, level, |x| round.alive[x], work)?;
        let (half, check) = high_half_aux(sub, &g, &w, round.gamma, params, work)?;
        checks.push(check);
        Ok((half.selected, half.u_good))
    })?;
    let hitting = HittingResult::from_selection(core, alive, u_good, rounds);
    let deviation = (0..core.u_count())
        .filter(|&u| hitting.u_good[u])
        .map(|u| (hitting.targets[u] - 0.1 - hitting.hits[u] as f64).max(0.0))
        .fold(0.0, f64::max);
    let (pairs, verts, _) = aux_selected(aux, vw, &hitting.selected);
    let (re, rv) = aux_reference(aux, vw, &core.level);
    Ok(MisRegimeResult {
        hitting,
        rounds: checks,
        aux_selected: pairs + verts,
        aux_reference: re + rv,
        deviation,
        max_prob_sum: max_sum,
    })
}

/// Iterated auxiliary halving of all nodes above level `K` down to `K`.
pub fn mis_low_prob_regime(inst: &MisAuxInstance, params: &ParamSet, work: &WorkCounter) -> Result<MisRegimeResult> {
    inst.validate()?;
    params.validate()?;
    low_regime_aux(&inst.core, &inst.aux, &inst.vertex_weight, params, work)
}

/// Iterated auxiliary halving for levels in `0..=K`. Every `u` must start
/// with `Σ 2^-k_v ≤ 40`.
pub fn mis_high_prob_regime(inst: &MisAuxInstance, params: &ParamSet, work: &WorkCounter) -> Result<MisRegimeResult> {
    inst.validate()?;
    params.validate()?;
    high_regime_aux(&inst.core, &inst.aux, &inst.vertex_weight, params, true, work)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisHittingResult {
    pub hitting: HittingResult,
    pub low: Option<MisRegimeResult>,
    pub high: MisRegimeResult,
    /// Largest `Σ 2^-k` of a `u` entering the high phase.
    pub post_low_max_sum: f64,
    /// Fewest hits of a good `u`; `None` without good nodes.
    pub min_good_hits: Option<u64>,
    /// `Σ_{S²} w(e')`
    pub aux_selected: f64,
    /// `Σ w(e') 2^-(k_v + k_v')`
    pub aux_reference: f64,
}

impl MisHittingResult {
    /// Smallest `C` with `Σ_{S²} w(e') ≤ C Σ w(e') 2^-(k_v + k_v')`.
    pub fn aux_c(&self) -> f64 {
        if self.aux_reference > 0.0 {
            self.aux_selected / self.aux_reference
        } else {
            0.0
        }
    }
}

/// Hitting set with auxiliary control for instances whose `u` have
/// `Σ 2^-k_v ∈ [5, 10]`.
///
/// Nodes above level `K` go through the low regime; the survivors join the
/// rest at level at most `K` for the high regime. `U` nodes with few
/// low-level neighbors skip the low phase.
pub fn core_mis_hitting(inst: &MisAuxInstance, params: &ParamSet, work: &WorkCounter) -> Result<MisHittingResult> {
    inst.validate()?;
    params.validate()?;
    let core = &inst.core;
    let (nu, nv) = (core.u_count(), core.v_count());
    let sums = core.probability_sums();
    if let Some(u) = (0..nu).find(|&u| !(sums[u] >= 5.0 - 1e-9 && sums[u] <= 10.0 + 1e-9)) {
        return Err(malformed(format!("u {u} has probability sum {} outside [5,10]", sums[u])));
    }
    let big_k = params.big_k(core.n_bound);
    let is_low: Vec<bool> = core.level.iter().map(|&k| k > big_k).collect();
    let floor = params.degree_floor(core.n_bound);
    let u_low: Vec<bool> = par::map_range(nu, |u| {
        let d = core.nbrs(u).iter().filter(|&&v| is_low[v as usize]).count() as u64;
        d > 0 && d >= floor
    });
    work.charge("hitting", (core.edge_count() + nu + nv) as u64);

    let mut in_high: Vec<bool> = is_low.iter().map(|&l| !l).collect();
    let mut u_high: Vec<bool> = u_low.iter().map(|&l| !l).collect();
    let mut low = None;
    if is_low.iter().any(|&l| l) {
        let (sub, u_map, v_map) = core.restrict(&u_low, &is_low, None, &core.level, work)?;
        let (aux_low, _, _) = induced_subgraph(&inst.aux, &is_low, work)?;
        let vw_low: Vec<f64> = par::map_slice(&v_map, |&v| {
            let v = v as usize;
            inst.vertex_weight[v]
                + inst
                    .aux
                    .entry_range(v)
                    .filter(|&i| !is_low[inst.aux.adjacency()[i] as usize])
                    .map(|i| inst.aux.weight_at(i) * pow2neg(core.level[inst.aux.adjacency()[i] as usize]))
                    .sum::<f64>()
        });
        let res = low_regime_aux(&sub, &aux_low, &vw_low, params, work)?;
        for (i, &v) in v_map.iter().enumerate() {
            in_high[v as usize] = res.hitting.selected[i];
        }
        for (i, &u) in u_map.iter().enumerate() {
            u_high[u as usize] = res.hitting.u_good[i];
        }
        low = Some(res);
    }

    let clamped: Vec<u32> = core.level.iter().map(|&k| k.min(big_k)).collect();
    let (sub, u_map, v_map) = core.restrict(&u_high, &in_high, None, &clamped, work)?;
    let post_low_max_sum = sub.probability_sums().into_iter().fold(0.0, f64::max);
    let enforce = params.mode == Mode::Paper;
    let (aux_high, _, _) = induced_subgraph(&inst.aux, &in_high, work)?;
    let vw_high: Vec<f64> = v_map.iter().map(|&v| inst.vertex_weight[v as usize]).collect();
    let high = high_regime_aux(&sub, &aux_high, &vw_high, params, enforce, work)?;

    let mut selected = vec![false; nv];
    for (i, &v) in v_map.iter().enumerate() {
        selected[v as usize] = high.hitting.selected[i];
    }
    let mut u_good = vec![false; nu];
    for (i, &u) in u_map.iter().enumerate() {
        u_good[u as usize] = high.hitting.u_good[i];
    }
    let rounds = low.as_ref().map_or(0, |l| l.hitting.rounds) + high.hitting.rounds;
    let hitting = HittingResult::from_selection(core, selected, u_good, rounds);
    let min_good_hits = (0..nu).filter(|&u| hitting.u_good[u]).map(|u| hitting.hits[u]).min();
    let (pairs, _, _) = aux_selected(&inst.aux, &inst.vertex_weight, &hitting.selected);
    let (reference, _) = aux_reference(&inst.aux, &inst.vertex_weight, &core.level);
    Ok(MisHittingResult {
        hitting,
        low,
        high,
        post_low_max_sum,
        min_good_hits,
        aux_selected: pairs,
        aux_reference: reference,
    })
}

// ---------------------------------------------------------------------------
// Independentish set

/// Marking level: `p_v = min(32 / 2^ceil(log2 deg), 1) = 2^-level`.
pub fn marking_level(deg: usize) -> u32 {
    ceil_log2(deg as u64).saturating_sub(5)
}

/// Edges point from lower to higher `(degree, id)`.
fn points_to(deg: &[usize], a: usize, c: usize) -> bool {
    (deg[a], a) < (deg[c], c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Independentish {
    /// `S*`
    pub selected: Vec<bool>,
    /// `S` before the out-degree filter.
    pub marked: Vec<bool>,
    pub level: Vec<u32>,
    /// Largest out-degree in `G[S*]`.
    pub max_out_degree: usize,
    /// `Σ_{u ∈ S* ∪ N(S*)} deg(u)`
    pub removed_degree: u64,
    pub edge_count: usize,
    /// `removed_degree / |E|`
    pub degree_fraction: f64,
    /// Size of `U` (good nodes of degree above 32).
    pub u_count: usize,
    /// Nodes whose greedy in-neighbor prefix overshot 7 or never reached 5.
    pub in_star_overshoot: usize,
    pub in_star_short: usize,
    pub core: MisHittingResult,
}

/// Independentish set `S*`: many edges touch `S* ∪ N(S*)` and `G[S*]`,
/// oriented by `(degree, id)`, has bounded out-degree.
pub fn independentish_set(g: &Graph, params: &ParamSet, work: &WorkCounter) -> Result<Independentish> {
    independentish_bounded(g, (g.node_count() as u64).max(4), params, work)
}

fn independentish_bounded(g: &Graph, n_bound: u64, params: &ParamSet, work: &WorkCounter) -> Result<Independentish> {
    let n = g.node_count();
    let m = g.edge_count();
    let adj = g.adjacency();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let level: Vec<u32> = deg.iter().map(|&d| marking_level(d)).collect();
    // (IN*(u), overshoot, short)
    let stars: Vec<(Option<Vec<u32>>, bool, bool)> = par::map_range(n, |u| {
        let d = deg[u];
        let ins = g.neighbors(u).iter().filter(|&&w| points_to(&deg, w as usize, u));
        let indeg = ins.clone().count();
        if d < 33 || 3 * indeg < d {
            return (None, false, false);
        }
        let mut list = Vec::new();
        let mut sum = 0.0;
        for &w in ins {
            list.push(w);
            sum += pow2neg(level[w as usize]);
            if sum >= 5.0 {
                break;
            }
        }
        let mut over = false;
        if sum > 7.0 {
            sum -= pow2neg(level[list.pop().unwrap() as usize]);
            over = true;
        }
        if (5.0..=10.0).contains(&sum) {
            (Some(list), over, false)
        } else {
            (None, over, true)
        }
    });
    work.charge("independentish", (n + 2 * adj.len()) as u64);

    let mut imp = Vec::new();
    let mut edges = Vec::new();
    let mut weight = vec![0.0f64; n];
    for (u, (star, _, _)) in stars.iter().enumerate() {
        if let Some(list) = star {
            let id = imp.len() as u32;
            imp.push(deg[u] as f64);
            for &v in list {
                edges.push((id, v));
                weight[v as usize] += deg[u] as f64;
            }
        }
    }
    let u_count = imp.len();
    let core = BipartiteInstance::from_edges(imp, level.clone(), &edges, n_bound)?;
    let owners = g.owners();
    let aux_w: Vec<f64> = par::map_range(adj.len(), |i| {
        let (a, c) = (owners[i] as usize, adj[i] as usize);
        if points_to(&deg, a, c) {
            weight[a]
        } else {
            weight[c]
        }
    });
    let aux = g.clone().without_orientation().with_weights(aux_w)?;
    work.charge("independentish", (edges.len() + adj.len()) as u64);
    let inst = MisAuxInstance { core, aux, vertex_weight: vec![0.0; n] };
    let res = core_mis_hitting(&inst, params, work)?;
    let marked = res.hitting.selected.clone();

    let cap = params.outdeg_cap;
    let selected: Vec<bool> = par::map_range(n, |v| {
        marked[v]
            && (g.neighbors(v).iter().filter(|&&w| marked[w as usize] && points_to(&deg, v, w as usize)).count() as u64)
                < cap
    });
    let max_out_degree = par::map_range(n, |v| {
        if !selected[v] {
            return 0;
        }
        g.neighbors(v).iter().filter(|&&w| selected[w as usize] && points_to(&deg, v, w as usize)).count()
    })
    .into_iter()
    .max()
    .unwrap_or(0);
    let removed_degree = par::sum_u64(n, |v| {
        if selected[v] || g.neighbors(v).iter().any(|&w| selected[w as usize]) {
            deg[v] as u64
        } else {
            0
        }
    });
    work.charge("independentish", (n + 3 * adj.len()) as u64);
    Ok(Independentish {
        selected,
        marked,
        level,
        max_out_degree,
        removed_degree,
        edge_count: m,
        degree_fraction: if m > 0 { removed_degree as f64 / m as f64 } else { 0.0 },
        u_count,
        in_star_overshoot: stars.iter().filter(|s| s.1).count(),
        in_star_short: stars.iter().filter(|s| s.2).count(),
        core: res,
    })
}

// ---------------------------------------------------------------------------
// Outer loop

/// One iteration of an MIS outer loop.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MisIteration {
    pub nodes: usize,
    pub edges: usize,
    /// `|S*|`, or marked nodes for the baseline.
    pub candidates: usize,
    pub colors: u64,
    pub best_class: usize,
    pub chosen: usize,
    pub removed_edges: usize,
    /// `removed_edges / edges`
    pub removed_fraction: f64,
    /// Removed-degree fraction of the independentish step.
    pub degree_fraction: f64,
    /// The degree fraction fell below 0.1.
    pub shortfall: bool,
    /// `S*` was empty and a single node was taken instead.
    pub fallback: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub members: Vec<bool>,
    pub trace: Vec<MisIteration>,
}

impl IndependentSet {
    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn nodes(&self) -> Vec<u32> {
        (0..self.members.len() as u32).filter(|&v| self.members[v as usize]).collect()
    }
}

/// Drop `chosen ∪ N(chosen)` from `cur`, move chosen and newly isolated
/// nodes into `members`, and compact.
fn remove_closed_neighborhood(
    cur: &Graph,
    map: &[u32],
    chosen: &[bool],
    members: &mut [bool],
    work: &WorkCounter,
) -> Result<(Graph, Vec<u32>)> {
    let n = cur.node_count();
    let removed: Vec<bool> =
        par::map_range(n, |v| chosen[v] || cur.neighbors(v).iter().any(|&w| chosen[w as usize]));
    let isolated: Vec<bool> =
        par::map_range(n, |v| !removed[v] && cur.neighbors(v).iter().all(|&w| removed[w as usize]));
    work.charge("mis", (n + 2 * cur.adjacency().len()) as u64);
    let keep: Vec<bool> = (0..n).map(|v| !removed[v] && !isolated[v]).collect();
    for v in 0..n {
        if chosen[v] || isolated[v] {
            members[map[v] as usize] = true;
        }
    }
    let (next, _, back) = induced_subgraph(cur, &keep, work)?;
    let map = back.iter().map(|&x| map[x as usize]).collect();
    Ok((next, map))
}

/// Start of an outer loop: isolated nodes join, the rest is compacted.
fn strip_isolated(g: &Graph, work: &WorkCounter) -> Result<(Vec<bool>, Graph, Vec<u32>)> {
    let n = g.node_count();
    let base = g.clone().without_orientation();
    let members: Vec<bool> = (0..n).map(|v| base.degree(v) == 0).collect();
    let keep: Vec<bool> = members.iter().map(|&m| !m).collect();
    let (cur, _, map) = induced_subgraph(&base, &keep, work)?;
    Ok((members, cur, map))
}

/// Deterministic maximal independent set.
pub fn maximal_independent_set(g: &Graph, params: &ParamSet, work: &WorkCounter) -> Result<IndependentSet> {
    params.validate()?;
    g.validate()?;
    let n_bound = (g.node_count() as u64).max(4);
    let (mut members, mut cur, mut map) = strip_isolated(g, work)?;
    let mut trace = Vec::new();
    while cur.node_count() > 0 {
        let ind = independentish_bounded(&cur, n_bound, params, work)?;
        let (chosen, colors, best_class, fallback) = pick_classes(&cur, &ind.selected, work)?;
        let edges = cur.edge_count();
        let nodes = cur.node_count();
        let (next, next_map) = remove_closed_neighborhood(&cur, &map, &chosen, &mut members, work)?;
        let removed_edges = edges - next.edge_count();
        trace.push(MisIteration {
            nodes,
            edges,
            candidates: ind.selected.iter().filter(|&&s| s).count(),
            colors,
            best_class,
            chosen: chosen.iter().filter(|&&c| c).count(),
            removed_edges,
            removed_fraction: if edges > 0 { removed_edges as f64 / edges as f64 } else { 1.0 },
            degree_fraction: ind.degree_fraction,
            shortfall: ind.degree_fraction < 0.1,
            fallback,
        });
        cur = next;
        map = next_map;
    }
    Ok(IndependentSet { members, trace })
}

/// Color `G[S*]` under the `(degree, id)` orientation, take the color class
/// whose closed neighborhood has the largest degree sum, then add the other
/// classes greedily in the same order. Returns the chosen set, the palette
/// size and the size of the best class.
fn pick_classes(cur: &Graph, cand: &[bool], work: &WorkCounter) -> Result<(Vec<bool>, u64, usize, bool)> {
    let n = cur.node_count();
    let deg: Vec<usize> = (0..n).map(|v| cur.degree(v)).collect();
    let mut chosen = vec![false; n];
    if !cand.iter().any(|&c| c) {
        let top = (0..n).max_by_key(|&v| (deg[v], v)).expect("nonempty graph");
        chosen[top] = true;
        return Ok((chosen, 0, 1, true));
    }
    let (sub, _, sub_map) = induced_subgraph(cur, cand, work)?;
    let sub = sub.oriented_by(|a, c| points_to(&deg, sub_map[a as usize] as usize, sub_map[c as usize] as usize))?;
    let coloring = color_delta_squared(&sub, work)?;
    let mut order: Vec<(u64, u32)> = (0..sub_map.len()).map(|x| (coloring.colors[x], x as u32)).collect();
    radix_sort_u64(&mut order, work);
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end < order.len() && order[end].0 == order[start].0 {
            end += 1;
        }
        classes.push((start, end));
        start = end;
    }
    let mut stamp = vec![usize::MAX; n];
    let mut value = vec![0u64; classes.len()];
    for (ci, &(s, e)) in classes.iter().enumerate() {
        for &(_, x) in &order[s..e] {
            let v = sub_map[x as usize] as usize;
            for u in std::iter::once(v).chain(cur.neighbors(v).iter().map(|&w| w as usize)) {
                if stamp[u] != ci {
                    stamp[u] = ci;
                    value[ci] += deg[u] as u64;
                }
            }
        }
    }
    work.charge("mis", (n + sub_map.len() + cur.adjacency().len()) as u64);
    let mut rank: Vec<usize> = (0..classes.len()).collect();
    rank.sort_by_key(|&c| (std::cmp::Reverse(value[c]), c));
    let mut blocked = vec![false; n];
    for &c in &rank {
        let (s, e) = classes[c];
        let class = &order[s..e];
        let joins: Vec<bool> = par::map_slice(class, |&(_, x)| !blocked[sub_map[x as usize] as usize]);
        for (&(_, x), j) in class.iter().zip(joins) {
            if j {
                let v = sub_map[x as usize] as usize;
                chosen[v] = true;
                blocked[v] = true;
                for &w in cur.neighbors(v) {
                    blocked[w as usize] = true;
                }
            }
        }
    }
    let touched: usize = (0..sub_map.len()).map(|x| deg[sub_map[x] as usize]).sum();
    work.charge("mis", (sub_map.len() + touched) as u64);
    let best = classes[rank[0]].1 - classes[rank[0]].0;
    Ok((chosen, coloring.num_colors, best, false))
}

/// Randomized reference: every node is marked with probability
/// `1/(10 deg)`, a marked node joins unless a marked neighbor has larger
/// `(degree, id)`, and joined nodes leave with their neighborhoods.
pub fn luby_mis_baseline(g: &Graph, seed: u64, work: &WorkCounter) -> Result<IndependentSet> {
    g.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut members, mut cur, mut map) = strip_isolated(g, work)?;
    let mut trace = Vec::new();
    while cur.node_count() > 0 {
        let n = cur.node_count();
        let deg: Vec<usize> = (0..n).map(|v| cur.degree(v)).collect();
        let marked: Vec<bool> = deg.iter().map(|&d| rng.gen::<f64>() < 1.0 / (10.0 * d as f64)).collect();
        let chosen: Vec<bool> = par::map_range(n, |v| {
            marked[v] && !cur.neighbors(v).iter().any(|&w| marked[w as usize] && points_to(&deg, v, w as usize))
        });
        work.charge("luby", (n + cur.adjacency().len()) as u64);
        let edges = cur.edge_count();
        let (next, next_map) = remove_closed_neighborhood(&cur, &map, &chosen, &mut members, work)?;
        let removed_edges = edges - next.edge_count();
        trace.push(MisIteration {
            nodes: n,
            edges,
            candidates: marked.iter().filter(|&&m| m).count(),
            chosen: chosen.iter().filter(|&&c| c).count(),
            removed_edges,
            removed_fraction: if edges > 0 { removed_edges as f64 / edges as f64 } else { 1.0 },
            ..Default::default()
        });
        cur = next;
        map = next_map;
    }
    Ok(IndependentSet { members, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn independent_and_maximal(g: &Graph, s: &[bool]) -> bool {
        (0..g.node_count()).all(|v| {
            let hit = g.neighbors(v).iter().any(|&w| s[w as usize]);
            if s[v] {
                !hit
            } else {
                hit
            }
        })
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<(u32, u32)> = (0..n).map(|i| (i as u32, ((i + 1) % n) as u32)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn check_buckets(g: &Graph, eb: &EdgeBucketing) {
        let mut seen = Vec::new();
        for i in 0..eb.count() {
            let mut sp = eb.specials(i);
            sp.sort_unstable();
            sp.dedup();
            assert_eq!(sp.len(), eb.b);
            for &(a, c) in eb.bucket(i) {
                seen.push((a.min(c), a.max(c)));
            }
        }
        for &(a, c) in &eb.leftover {
            seen.push((a.min(c), a.max(c)));
        }
        seen.sort_unstable();
        let all: Vec<(u32, u32)> = g.edges().into_iter().map(|(a, c, _)| (a, c)).collect();
        assert_eq!(seen, all);
        assert!(eb.leftover.len() <= eb.leftover_cap());
    }

    #[test]
    fn star_buckets() {
        let b = 3;
        let e: Vec<(u32, u32)> = (1..=2 * b as u32).map(|i| (0, i)).collect();
        let g = Graph::from_edges(2 * b + 1, &e).unwrap();
        let eb = edge_buckets(&g, b, &WorkCounter::new()).unwrap();
        assert_eq!(eb.count(), 2);
        assert!(eb.leftover.is_empty());
        check_buckets(&g, &eb);
    }

    #[test]
    fn disjoint_edges_one_bucket() {
        let b = 4;
        let e: Vec<(u32, u32)> = (0..b as u32).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = Graph::from_edges(2 * b, &e).unwrap();
        let eb = edge_buckets(&g, b, &WorkCounter::new()).unwrap();
        assert_eq!(eb.count(), 1);
        check_buckets(&g, &eb);
    }

    #[test]
    fn dense_buckets() {
        let mut e = Vec::new();
        for a in 0..30u32 {
            for c in a + 1..30 {
                if (a * 7 + c * 3) % 5 != 0 {
                    e.push((a, c));
                }
            }
        }
        let g = Graph::from_edges(30, &e).unwrap();
        for b in [2, 3, 5, 8] {
            check_buckets(&g, &edge_buckets(&g, b, &WorkCounter::new()).unwrap());
        }
    }

    #[test]
    fn five_cycle() {
        let g = cycle(5);
        let s = maximal_independent_set(&g, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert_eq!(s.size(), 2);
        assert!(independent_and_maximal(&g, &s.members));
        let l = luby_mis_baseline(&g, 7, &WorkCounter::new()).unwrap();
        assert!(independent_and_maximal(&g, &l.members));
    }

    #[test]
    fn edgeless() {
        let g = Graph::empty(4);
        let s = maximal_independent_set(&g, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert_eq!(s.size(), 4);
        assert!(s.trace.is_empty());
    }

    #[test]
    fn clique_marks_everything() {
        let mut e = Vec::new();
        for a in 0..5u32 {
            for c in a + 1..5 {
                e.push((a, c));
            }
        }
        let g = Graph::from_edges(5, &e).unwrap();
        let ind = independentish_set(&g, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(ind.selected.iter().all(|&s| s));
        assert_eq!(ind.removed_degree, 2 * g.edge_count() as u64);
    }

    #[test]
    fn star_independentish() {
        let e: Vec<(u32, u32)> = (1..=64).map(|i| (0, i)).collect();
        let g = Graph::from_edges(65, &e).unwrap();
        let ind = independentish_set(&g, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(ind.removed_degree as f64 >= 0.1 * g.edge_count() as f64);
        assert!((ind.max_out_degree as u64) < ParamSet::desk().outdeg_cap);
    }

    #[test]
    fn dense_graph_mis() {
        let n = 300;
        let mut e = Vec::new();
        for a in 0..n as u32 {
            for c in a + 1..n as u32 {
                if (a as u64 * 31 + c as u64 * 17) % 7 == 0 {
                    e.push((a, c));
                }
            }
        }
        let g = Graph::from_edges(n, &e).unwrap();
        let s = maximal_independent_set(&g, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(independent_and_maximal(&g, &s.members));
    }

    #[test]
    fn single_aux_edge_forbids_both() {
        let nv = 8;
        let core = BipartiteInstance::from_edges(vec![], vec![0; nv], &[], 1 << 16).unwrap();
        let aux = Graph::from_edges(nv, &[(2, 5)]).unwrap();
        let inst = MisAuxInstance::new(core, aux, vec![0.0; nv]).unwrap();
        let (half, check) = mis_high_prob_half(&inst, 0.5, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        assert!(check.holds());
        assert!(!(half.selected[2] && half.selected[5]));
    }

    #[test]
    fn core_hitting_level_one() {
        // u with 12 neighbors at level 1: Σ = 6.
        let edges: Vec<(u32, u32)> = (0..12).map(|v| (0, v)).collect();
        let core = BipartiteInstance::from_edges(vec![1.0], vec![1; 12], &edges, 1 << 10).unwrap();
        let inst = MisAuxInstance::bare(core);
        let r = core_mis_hitting(&inst, &ParamSet::desk(), &WorkCounter::new()).unwrap();
        if r.hitting.u_good[0] {
            assert!(r.hitting.hits[0] >= 1);
        }
    }
}
