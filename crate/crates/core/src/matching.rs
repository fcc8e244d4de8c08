//! Maximal matching.
//!
//! Nodes are grouped by rounded degree `d(v) = 2^ceil(log2 deg)` and
//! processed from the largest category down. Each iteration of a stage
//! samples the live edges at category-`d` nodes at rate `16/d` through a
//! hitting set, colors the sampled edges (constant degree) as a conflict
//! graph, and adds the best color class, extended greedily by the other
//! classes, to the matching. Nodes whose live degree drops below `d/3` move
//! to the category of their live degree.

use serde::{Deserialize, Serialize};

use crate::coloring::color_delta_squared;
use crate::error::Result;
use crate::graph::{sort_edges_to_csr, Graph};
use crate::hitting::{hitting_set, BipartiteInstance};
use crate::par;
use crate::params::ParamSet;
use crate::scan::{ceil_log2, radix_sort_u64};
use crate::work::WorkCounter;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchingIteration {
    /// Rounded degree `d` of the stage.
    pub category: u64,
    /// `|V_d|` after cleanup.
    pub nodes: usize,
    /// Live edges at `V_d`.
    pub live_edges: usize,
    pub downgraded: usize,
    /// Edges selected by the hitting set.
    pub sampled: usize,
    /// Largest number of sampled edges at one node.
    pub sample_degree: usize,
    pub colors: u64,
    pub matched_edges: usize,
    /// Live edges at `V_d` that lost an endpoint to the matching.
    pub removed_edges: usize,
    pub removed_fraction: f64,
    /// The hitting set came back empty and all live edges were used.
    pub fallback: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// `(a, b)` with `a < b`.
    pub edges: Vec<(u32, u32)>,
    pub matched: Vec<bool>,
    pub trace: Vec<MatchingIteration>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Deterministic maximal matching.
pub fn maximal_matching(g: &Graph, params: &ParamSet, work: &WorkCounter) -> Result<Matching> {
    params.validate()?;
    g.validate()?;
    let n = g.node_count();
    let n_bound = ((n + g.edge_count()) as u64).max(4);
    let mut live: Vec<Vec<u32>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut matched = vec![false; n];
    let mut out = Matching::default();

    // Category buckets by rounded degree.
    let mut keyed: Vec<(u64, u32)> =
        (0..n).filter(|&v| g.degree(v) > 0).map(|v| (ceil_log2(g.degree(v) as u64) as u64, v as u32)).collect();
    radix_sort_u64(&mut keyed, work);
    let top = keyed.last().map_or(0, |k| k.0 as usize);
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
    for &(j, v) in &keyed {
        buckets[j as usize].push(v);
    }
    work.charge("matching", (n + g.adjacency().len()) as u64);

    for j in (0..=top).rev() {
        let d = 1u64 << j;
        loop {
            // Cleanup: drop matched neighbors, downgrade low live degree.
            let list = std::mem::take(&mut buckets[j]);
            let mut members = Vec::with_capacity(list.len());
            let mut downgraded = 0;
            for v in list {
                let v = v as usize;
                if matched[v] {
                    continue;
                }
                let before = live[v].len();
                live[v].retain(|&w| !matched[w as usize]);
                work.charge("cleanup", before as u64 + 1);
                let len = live[v].len();
                if 3 * (len as u64) < d {
                    downgraded += 1;
                    if len > 0 {
                        buckets[ceil_log2(len as u64) as usize].push(v as u32);
                    }
                } else {
                    members.push(v as u32);
                }
            }
            if members.is_empty() {
                break;
            }
            let step = match_step(&members, &live, &mut matched, d, n_bound, params, work)?;
            let mut it = step.0;
            it.category = d;
            it.downgraded = downgraded;
            out.edges.extend(step.1);
            out.trace.push(it);
            buckets[j] = members.into_iter().filter(|&v| !matched[v as usize]).collect();
        }
    }
    out.edges.sort_unstable();
    out.matched = matched;
    Ok(out)
}

/// One core iteration on `V_d = members`.
fn match_step(
    members: &[u32],
    live: &[Vec<u32>],
    matched: &mut [bool],
    d: u64,
    n_bound: u64,
    params: &ParamSet,
    work: &WorkCounter,
) -> Result<(MatchingIteration, Vec<(u32, u32)>)> {
    let n = matched.len() as u64;
    // Live edges at V_d, each once.
    let mut keyed: Vec<(u64, u32)> = Vec::new();
    for &v in members {
        for &w in &live[v as usize] {
            let (a, b) = (v.min(w), v.max(w));
            keyed.push((a as u64 * n + b as u64, 0));
        }
    }
    radix_sort_u64(&mut keyed, work);
    keyed.dedup_by_key(|k| k.0);
    let edges: Vec<(u32, u32)> = keyed.iter().map(|&(k, _)| ((k / n) as u32, (k % n) as u32)).collect();

    // Endpoints form U; every edge is a V node of the hitting instance.
    let mut ends: Vec<(u64, u32)> = Vec::with_capacity(2 * edges.len());
    for (i, &(a, b)) in edges.iter().enumerate() {
        ends.push((a as u64, i as u32));
        ends.push((b as u64, i as u32));
    }
    radix_sort_u64(&mut ends, work);
    let mut u_ids: Vec<u32> = Vec::new();
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(ends.len());
    for &(x, e) in &ends {
        if u_ids.last() != Some(&(x as u32)) {
            u_ids.push(x as u32);
        }
        pairs.push((u_ids.len() as u32 - 1, e));
    }
    let incident: Vec<f64> = {
        let mut c = vec![0.0; u_ids.len()];
        for &(u, _) in &pairs {
            c[u as usize] += 1.0;
        }
        c
    };
    let level = (ceil_log2(d) as u32).saturating_sub(4);
    let inst = BipartiteInstance::from_edges(incident.clone(), vec![level; edges.len()], &pairs, n_bound)?;
    work.charge("matching", (members.len() + 3 * edges.len()) as u64);
    let hit = hitting_set(&inst, params, work)?;
    let mut sampled: Vec<u32> = (0..edges.len() as u32).filter(|&e| hit.selected[e as usize]).collect();
    let fallback = sampled.is_empty();
    if fallback {
        sampled = (0..edges.len() as u32).collect();
    }

    // Conflict graph on sampled edges: two edges conflict if they share an
    // endpoint. `pairs` is grouped by endpoint.
    let mut is_sampled = vec![u32::MAX; edges.len()];
    for (i, &e) in sampled.iter().enumerate() {
        is_sampled[e as usize] = i as u32;
    }
    let mut conflicts: Vec<(u32, u32)> = Vec::new();
    let mut sample_degree = 0;
    let mut s = 0;
    while s < pairs.len() {
        let mut t = s;
        while t < pairs.len() && pairs[t].0 == pairs[s].0 {
            t += 1;
        }
        let local: Vec<u32> =
            pairs[s..t].iter().map(|p| is_sampled[p.1 as usize]).filter(|&x| x != u32::MAX).collect();
        sample_degree = sample_degree.max(local.len());
        for x in 0..local.len() {
            for y in x + 1..local.len() {
                conflicts.push((local[x], local[y]));
            }
        }
        s = t;
    }
    let conflict = sort_edges_to_csr(&conflicts, sampled.len(), work)?;
    let coloring = color_delta_squared(&conflict, work)?;

    // Classes by color; value = live edges at V_d touching the class.
    let mut order: Vec<(u64, u32)> = (0..sampled.len()).map(|x| (coloring.colors[x], x as u32)).collect();
    radix_sort_u64(&mut order, work);
    let deg_of = |x: u32| incident[u_ids.binary_search(&x).unwrap()];
    let mut classes: Vec<(usize, usize, f64)> = Vec::new();
    let mut s = 0;
    while s < order.len() {
        let mut t = s;
        while t < order.len() && order[t].0 == order[s].0 {
            t += 1;
        }
        let value: f64 = order[s..t]
            .iter()
            .map(|&(_, x)| {
                let (a, b) = edges[sampled[x as usize] as usize];
                deg_of(a) + deg_of(b) - 1.0
            })
            .sum();
        classes.push((s, t, value));
        s = t;
    }
    classes.sort_by(|p, q| q.2.total_cmp(&p.2).then(p.0.cmp(&q.0)));
    let mut taken = Vec::new();
    for &(s, t, _) in &classes {
        let class = &order[s..t];
        let joins: Vec<bool> = par::map_slice(class, |&(_, x)| {
            let (a, b) = edges[sampled[x as usize] as usize];
            !matched[a as usize] && !matched[b as usize]
        });
        for (&(_, x), j) in class.iter().zip(joins) {
            if j {
                let (a, b) = edges[sampled[x as usize] as usize];
                matched[a as usize] = true;
                matched[b as usize] = true;
                taken.push((a, b));
            }
        }
    }
    let removed = edges.iter().filter(|&&(a, b)| matched[a as usize] || matched[b as usize]).count();
    work.charge("matching", (2 * sampled.len() + conflicts.len() + edges.len()) as u64);
    let it = MatchingIteration {
        category: d,
        nodes: members.len(),
        live_edges: edges.len(),
        downgraded: 0,
        sampled: sampled.len(),
        sample_degree,
        colors: coloring.num_colors,
        matched_edges: taken.len(),
        removed_edges: removed,
        removed_fraction: if edges.is_empty() { 0.0 } else { removed as f64 / edges.len() as f64 },
        fallback,
    };
    Ok((it, taken))
}
