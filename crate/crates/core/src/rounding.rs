//! Local rounding by conditional expectations, and the max-cut warm-up.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::coloring::defective_coloring;
use crate::error::{contract, Error, Result};
use crate::graph::{sort_weighted_edges_to_csr, Graph};
use crate::par;
use crate::scan::radix_sort_u64;
use crate::work::WorkCounter;

/// Signed node utilities and nonnegative pairwise costs. Parallel cost
/// edges are allowed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RoundingInstance {
    pub utils: Vec<f64>,
    pub cost_edges: Vec<(u32, u32, f64)>,
    pub eps: f64,
}

impl RoundingInstance {
    pub fn node_count(&self) -> usize {
        self.utils.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(contract("rounding eps must be positive"));
        }
        let n = self.utils.len();
        if self.utils.iter().any(|u| !u.is_finite()) {
            return Err(contract("utilities must be finite"));
        }
        for &(a, b, c) in &self.cost_edges {
            if a as usize >= n || b as usize >= n || a == b {
                return Err(contract(format!("bad cost edge ({a},{b})")));
            }
            if !(c >= 0.0) || !c.is_finite() {
                return Err(contract(format!("bad cost {c}")));
            }
        }
        Ok(())
    }

    /// `Σ_{v∈S} util(v) − Σ_{e⊆S} cost(e)`.
    pub fn objective(&self, selected: &[bool]) -> f64 {
        let u = par::sum_f64(self.utils.len(), |v| if selected[v] { self.utils[v] } else { 0.0 });
        let c = par::sum_f64(self.cost_edges.len(), |i| {
            let (a, b, c) = self.cost_edges[i];
            if selected[a as usize] && selected[b as usize] {
                c
            } else {
                0.0
            }
        });
        u - c
    }

    pub fn util_sum(&self) -> f64 {
        par::sum_f64(self.utils.len(), |v| self.utils[v])
    }

    pub fn cost_sum(&self) -> f64 {
        par::sum_f64(self.cost_edges.len(), |i| self.cost_edges[i].2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingCertificate {
    pub objective: f64,
    pub bound: f64,
    pub util_sum: f64,
    pub cost_sum: f64,
    pub mono_cost: f64,
    pub eps: f64,
}

impl RoundingCertificate {
    pub fn holds(&self) -> bool {
        self.objective >= self.bound
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundingOutcome {
    pub selected: Vec<bool>,
    /// Class of every node; classes are decided in increasing order.
    pub classes: Vec<u64>,
    pub certificate: RoundingCertificate,
}

static CALLS: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide count of `(local_round calls, certificate violations)`.
pub fn audit() -> (u64, u64) {
    (CALLS.load(Ordering::SeqCst), VIOLATIONS.load(Ordering::SeqCst))
}

/// Cost multigraph with parallel edges merged, as a weighted CSR graph.
fn merged_cost_graph(inst: &RoundingInstance, work: &WorkCounter) -> Result<Graph> {
    let n = inst.node_count() as u64;
    let mut keyed: Vec<(u64, u32)> = inst
        .cost_edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b, _))| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            (a as u64 * n + b as u64, i as u32)
        })
        .collect();
    radix_sort_u64(&mut keyed, work);
    let mut merged: Vec<(u32, u32, f64)> = Vec::new();
    let mut last = u64::MAX;
    for &(key, i) in &keyed {
        let c = inst.cost_edges[i as usize].2;
        if key == last {
            merged.last_mut().unwrap().2 += c;
        } else {
            merged.push(((key / n) as u32, (key % n) as u32, c));
            last = key;
        }
    }
    sort_weighted_edges_to_csr(&merged, inst.node_count(), work)
}

/// Select `V'` with
/// `util(V') − cost(V') ≥ ½Σutil − ¼Σcost − eps·Σcost`.
///
/// The cost graph is defective-colored with parameter `eps` and its
/// monochromatic edges are ignored. Classes are then decided in order; a
/// node joins iff its utility covers the cost to already included
/// neighbors plus half the cost to neighbors of later classes.
pub fn local_round(inst: &RoundingInstance, work: &WorkCounter) -> Result<RoundingOutcome> {
    inst.validate()?;
    let n = inst.node_count();
    let (g, classes) = if inst.cost_edges.is_empty() {
        (Graph::empty(n), vec![0u64; n])
    } else {
        let g = merged_cost_graph(inst, work)?;
        let coloring = defective_coloring(&g, inst.eps, work)?;
        (g, coloring.colors)
    };
    let adj = g.adjacency();
    let mut order: Vec<(u64, u32)> = (0..n).map(|v| (classes[v], v as u32)).collect();
    radix_sort_u64(&mut order, work);
    let mut selected = vec![false; n];
    let mut start = 0;
    while start < n {
        let c = order[start].0;
        let mut end = start;
        while end < n && order[end].0 == c {
            end += 1;
        }
        let class = &order[start..end];
        let decide = |&(_, v): &(u64, u32)| -> bool {
            let v = v as usize;
            let mut marginal = inst.utils[v];
            for i in g.entry_range(v) {
                let w = adj[i] as usize;
                if classes[w] < c {
                    if selected[w] {
                        marginal -= g.weight_at(i);
                    }
                } else if classes[w] > c {
                    marginal -= 0.5 * g.weight_at(i);
                }
            }
            marginal >= 0.0
        };
        let decided: Vec<bool> = if class.len() >= 1024 {
            par::map_slice(class, decide)
        } else {
            class.iter().map(decide).collect()
        };
        for (&(_, v), d) in class.iter().zip(decided) {
            selected[v as usize] = d;
        }
        start = end;
    }
    work.charge("rounding", (n + adj.len() + inst.cost_edges.len()) as u64);

    let util_sum = inst.util_sum();
    let cost_sum = inst.cost_sum();
    let mono_cost = par::sum_f64(inst.cost_edges.len(), |i| {
        let (a, b, c) = inst.cost_edges[i];
        if classes[a as usize] == classes[b as usize] {
            c
        } else {
            0.0
        }
    });
    let certificate = RoundingCertificate {
        objective: inst.objective(&selected),
        bound: 0.5 * util_sum - 0.25 * cost_sum - inst.eps * cost_sum,
        util_sum,
        cost_sum,
        mono_cost,
        eps: inst.eps,
    };
    CALLS.fetch_add(1, Ordering::SeqCst);
    if !certificate.holds() {
        VIOLATIONS.fetch_add(1, Ordering::SeqCst);
        return Err(Error::Certificate(format!(
            "rounding objective {} below bound {}",
            certificate.objective, certificate.bound
        )));
    }
    Ok(RoundingOutcome { selected, classes, certificate })
}

/// Total weight of edges crossing `(S, V \ S)`.
pub fn cut_weight(g: &Graph, side: &[bool]) -> f64 {
    par::sum_f64(g.node_count(), |v| {
        g.entry_range(v)
            .filter(|&i| {
                let w = g.adjacency()[i] as usize;
                w > v && side[w] != side[v]
            })
            .map(|i| g.weight_at(i))
            .sum()
    })
}

/// Cut of weight at least `(½ − eps)·Σw`.
///
/// After a defective coloring, nodes are placed class by class on the side
/// opposite to the heavier part of their already placed neighborhood.
/// Monochromatic edges are counted as uncut.
pub fn max_cut_half(g: &Graph, eps: f64, work: &WorkCounter) -> Result<Vec<bool>> {
    let n = g.node_count();
    let coloring = defective_coloring(g, eps, work)?;
    let classes = coloring.colors;
    let mut order: Vec<(u64, u32)> = (0..n).map(|v| (classes[v], v as u32)).collect();
    radix_sort_u64(&mut order, work);
    let mut side = vec![false; n];
    let mut start = 0;
    while start < n {
        let c = order[start].0;
        let mut end = start;
        while end < n && order[end].0 == c {
            end += 1;
        }
        let class = &order[start..end];
        let place = |&(_, v): &(u64, u32)| -> bool {
            let v = v as usize;
            let (mut inside, mut outside) = (0.0, 0.0);
            for i in g.entry_range(v) {
                let w = g.adjacency()[i] as usize;
                if classes[w] < c {
                    if side[w] {
                        inside += g.weight_at(i);
                    } else {
                        outside += g.weight_at(i);
                    }
                }
            }
            inside <= outside
        };
        let placed: Vec<bool> = class.iter().map(place).collect();
        for (&(_, v), s) in class.iter().zip(placed) {
            side[v as usize] = s;
        }
        start = end;
    }
    work.charge("maxcut", (n + g.adjacency().len()) as u64);
    let cut = cut_weight(g, &side);
    let total = g.total_weight();
    if cut < (0.5 - eps) * total {
        return Err(Error::Certificate(format!("cut {cut} below (1/2 - {eps}) * {total}")));
    }
    Ok(side)
}
