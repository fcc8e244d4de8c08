//! Quadratic potentials over bucket families and their translation into
//! rounding utilities and costs.
//!
//! A potential is
//! `Σ_B α_B (|S∩B| − b/2)² + Σ_v λ_v [v∈S] + Σ_{(a,c)} μ_ac [a∈S][c∈S]`.
//! With `x_v ∈ {0,1}` each bucket term expands to
//! `α b²/4 − α(b−1)Σ x + 2α Σ_{pairs} x x`, so minimizing the potential is
//! maximizing `util(S) − cost(S)` with `util = α(b−1) − λ` and
//! `cost = 2α` per bucket pair plus `μ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rounding::{local_round, RoundingInstance};
use crate::work::WorkCounter;

#[derive(Clone, Debug, Default)]
pub struct Potential {
    pub name: &'static str,
    pub b: usize,
    /// Flattened buckets, `b` node ids each.
    pub members: Vec<u32>,
    pub alpha: Vec<f64>,
    pub linear: Vec<(u32, f64)>,
    pub pairs: Vec<(u32, u32, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialReading {
    pub name: String,
    pub value: f64,
    pub expectation: f64,
}

impl Potential {
    pub fn new(name: &'static str, b: usize) -> Self {
        Potential { name, b, ..Default::default() }
    }

    pub fn bucket_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn bucket(&self, i: usize) -> &[u32] {
        &self.members[i * self.b..(i + 1) * self.b]
    }

    pub fn push_bucket(&mut self, nodes: &[u32], alpha: f64) {
        debug_assert_eq!(nodes.len(), self.b);
        self.members.extend_from_slice(nodes);
        self.alpha.push(alpha);
    }

    /// Number of selected members in every bucket.
    pub fn bucket_hits(&self, selected: &[bool]) -> Vec<usize> {
        par::map_range(self.bucket_count(), |i| {
            self.bucket(i).iter().filter(|&&v| selected[v as usize]).count()
        })
    }

    pub fn evaluate(&self, selected: &[bool]) -> f64 {
        let half = self.b as f64 / 2.0;
        let buckets = par::sum_f64(self.bucket_count(), |i| {
            let hit = self.bucket(i).iter().filter(|&&v| selected[v as usize]).count() as f64;
            self.alpha[i] * (hit - half) * (hit - half)
        });
        let lin = par::sum_f64(self.linear.len(), |i| {
            let (v, l) = self.linear[i];
            if selected[v as usize] {
                l
            } else {
                0.0
            }
        });
        let quad = par::sum_f64(self.pairs.len(), |i| {
            let (a, c, m) = self.pairs[i];
            if selected[a as usize] && selected[c as usize] {
                m
            } else {
                0.0
            }
        });
        buckets + lin + quad
    }

    /// Expected value when every node is kept independently with
    /// probability 1/2.
    pub fn expectation(&self) -> f64 {
        let b = self.b as f64;
        par::sum_f64(self.bucket_count(), |i| self.alpha[i] * b / 4.0)
            + par::sum_f64(self.linear.len(), |i| self.linear[i].1 / 2.0)
            + par::sum_f64(self.pairs.len(), |i| self.pairs[i].2 / 4.0)
    }

    pub fn reading(&self, selected: &[bool]) -> PotentialReading {
        PotentialReading { name: self.name.to_string(), value: self.evaluate(selected), expectation: self.expectation() }
    }

    /// Add this potential's utilities and costs to a rounding instance.
    pub fn add_to(&self, inst: &mut RoundingInstance, work: &WorkCounter) {
        let b = self.b;
        for i in 0..self.bucket_count() {
            let gain = self.alpha[i] * (b as f64 - 1.0);
            for &v in self.bucket(i) {
                inst.utils[v as usize] += gain;
            }
        }
        for &(v, l) in &self.linear {
            inst.utils[v as usize] -= l;
        }
        let per_bucket: Vec<Vec<(u32, u32, f64)>> = par::map_range(self.bucket_count(), |i| {
            let nodes = self.bucket(i);
            let c = 2.0 * self.alpha[i];
            let mut out = Vec::with_capacity(b * b.saturating_sub(1) / 2);
            for x in 0..b {
                for y in x + 1..b {
                    out.push((nodes[x], nodes[y], c));
                }
            }
            out
        });
        for chunk in per_bucket {
            inst.cost_edges.extend(chunk);
        }
        inst.cost_edges.extend(self.pairs.iter().copied());
        work.charge(
            "potential",
            (self.members.len() + self.bucket_count() * b * b.saturating_sub(1) / 2 + self.linear.len() + self.pairs.len())
                as u64,
        );
    }
}

/// Rounding instance assembled from several potentials over `n` nodes.
pub fn assemble(n: usize, potentials: &[Potential], eps: f64, work: &WorkCounter) -> RoundingInstance {
    let mut inst = RoundingInstance { utils: vec![0.0; n], cost_edges: Vec::new(), eps };
    for p in potentials {
        p.add_to(&mut inst, work);
    }
    inst
}

/// Constant term `Σ α b²/4`, so that `Φ(S) = const − util(S) + cost(S)`.
pub fn constant_term(potentials: &[Potential]) -> f64 {
    potentials
        .iter()
        .map(|p| {
            let b = p.b as f64;
            par::sum_f64(p.bucket_count(), |i| p.alpha[i] * b * b / 4.0)
        })
        .sum()
}

/// Outcome of rounding a sum of potentials.
#[derive(Clone, Debug)]
pub struct RoundedPotential {
    pub selected: Vec<bool>,
    pub value: f64,
    pub expectation: f64,
    pub bound: f64,
    pub eps: f64,
    pub readings: Vec<PotentialReading>,
}

/// Pick `S` over `n` nodes with `Σ Φ(S) ≤ E[Σ Φ] + slack`, then check the
/// result against `bound` and record it under `family`.
///
/// The rounding parameter is `slack / Σcost`, so the rounding guarantee
/// translates exactly into the additive slack.
pub fn round_potentials(
    n: usize,
    potentials: &[Potential],
    slack: f64,
    bound: f64,
    family: &str,
    work: &WorkCounter,
) -> Result<RoundedPotential> {
    let mut inst = assemble(n, potentials, 1.0, work);
    let cost = inst.cost_sum();
    let expectation: f64 = potentials.iter().map(Potential::expectation).sum();
    if cost > 0.0 {
        inst.eps = (slack * (1.0 - 1e-9) / cost).clamp(f64::MIN_POSITIVE, 1.0);
    }
    let outcome = local_round(&inst, work)?;
    let selected = outcome.selected;
    let readings: Vec<PotentialReading> = potentials.iter().map(|p| p.reading(&selected)).collect();
    let value: f64 = readings.iter().map(|r| r.value).sum();
    if !super::record_potential(family, value, bound) {
        return Err(Error::Certificate(format!("{family} potential {value} above bound {bound}")));
    }
    Ok(RoundedPotential { selected, value, expectation, bound, eps: inst.eps, readings })
}
