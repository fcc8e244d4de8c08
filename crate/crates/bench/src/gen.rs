//! Seeded graph generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use dpar::hitting::{pow2neg, BipartiteInstance};
use dpar::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// `m` distinct edges uniformly at random.
    Gnm,
    /// Row-major grid `ceil(sqrt n)` wide, truncated to `n` nodes.
    Grid,
    /// Node 0 joined to all others.
    Star,
    Complete,
    /// Preferential attachment, `m` edges per new node (default 2).
    Powerlaw,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GraphKind::Gnm => "gnm",
            GraphKind::Grid => "grid",
            GraphKind::Star => "star",
            GraphKind::Complete => "complete",
            GraphKind::Powerlaw => "powerlaw",
        };
        f.write_str(s)
    }
}

impl FromStr for GraphKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gnm" => GraphKind::Gnm,
            "grid" => GraphKind::Grid,
            "star" => GraphKind::Star,
            "complete" => GraphKind::Complete,
            "powerlaw" => GraphKind::Powerlaw,
            _ => bail!("unknown graph kind '{s}'"),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub n: usize,
    /// Edge count for `gnm`, attachment count for `powerlaw`; ignored
    /// otherwise.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Draw edge weights uniformly from `[0, 1)` with the same seed.
    #[serde(default)]
    pub weighted: bool,
}

impl GraphSpec {
    pub fn new(kind: GraphKind, n: usize, m: Option<usize>, seed: u64) -> Self {
        GraphSpec { kind, n, m, seed, weighted: false }
    }

    pub fn label(&self) -> String {
        let mut s = format!("{}:n={}", self.kind, self.n);
        if let Some(m) = self.m {
            s.push_str(&format!(":m={m}"));
        }
        s.push_str(&format!(":seed={}", self.seed));
        if self.weighted {
            s.push_str(":w");
        }
        s
    }
}

/// `kind:n=<n>[:m=<m>][:seed=<s>][:w]`
impl FromStr for GraphSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind: GraphKind = parts.next().unwrap_or_default().parse()?;
        let mut spec = GraphSpec::new(kind, 0, None, 0);
        let mut have_n = false;
        for p in parts {
            match p.split_once('=') {
                Some(("n", v)) => {
                    spec.n = v.parse()?;
                    have_n = true;
                }
                Some(("m", v)) => spec.m = Some(v.parse()?),
                Some(("seed", v)) => spec.seed = v.parse()?,
                None if p == "w" => spec.weighted = true,
                _ => bail!("bad graph spec field '{p}'"),
            }
        }
        if !have_n {
            bail!("graph spec '{s}' needs n=<nodes>");
        }
        Ok(spec)
    }
}

/// Deterministic simple graph for `spec`.
pub fn generate_graph(spec: &GraphSpec) -> Result<Graph> {
    let n = spec.n;
    if n > u32::MAX as usize {
        bail!("n = {n} exceeds 32-bit node ids");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.kind {
        GraphKind::Gnm => gnm(n, spec.m.unwrap_or(0), &mut rng)?,
        GraphKind::Grid => grid(n),
        GraphKind::Star => (1..n as u32).map(|v| (0, v)).collect(),
        GraphKind::Complete => {
            if n > 1 << 14 {
                bail!("complete graph on {n} nodes is too large");
            }
            let mut e = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    e.push((a, b));
                }
            }
            e
        }
        GraphKind::Powerlaw => powerlaw(n, spec.m.unwrap_or(2), &mut rng)?,
    };
    let g = Graph::from_edges(n, &edges)?;
    if spec.weighted {
        let w: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen::<f64>()).collect();
        return Ok(with_edge_weights(g, &w)?);
    }
    Ok(g)
}

/// Attach one weight per undirected edge, in the order of [`Graph::edges`].
pub fn with_edge_weights(g: Graph, w: &[f64]) -> Result<Graph> {
    let edges: Vec<(u32, u32, f64)> = g.edges().iter().zip(w).map(|(&(a, b, _), &x)| (a, b, x)).collect();
    Ok(Graph::from_weighted_edges(g.node_count(), &edges)?)
}

fn max_edges(n: usize) -> u128 {
    n as u128 * (n as u128).saturating_sub(1) / 2
}

fn gnm(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    let cap = max_edges(n);
    if m as u128 > cap {
        bail!("gnm: m = {m} exceeds n(n-1)/2 = {cap}");
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    if 2 * m as u128 > cap {
        // Dense: shuffle all pairs.
        let mut all: Vec<(u32, u32)> = Vec::with_capacity(cap as usize);
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                all.push((a, b));
            }
        }
        all.shuffle(rng);
        all.truncate(m);
        return Ok(all);
    }
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let a = rng.gen_range(0..n as u32);
        let b = rng.gen_range(0..n as u32);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if seen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}

fn grid(n: usize) -> Vec<(u32, u32)> {
    let w = (n as f64).sqrt().ceil().max(1.0) as usize;
    let mut e = Vec::new();
    for v in 0..n {
        if (v + 1) % w != 0 && v + 1 < n {
            e.push((v as u32, v as u32 + 1));
        }
        if v + w < n {
            e.push((v as u32, (v + w) as u32));
        }
    }
    e
}

/// Barabási–Albert: a clique on `k + 1` seed nodes, then every new node
/// attaches to `k` distinct earlier nodes chosen proportionally to degree.
fn powerlaw(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    if k == 0 {
        bail!("powerlaw: attachment count must be positive");
    }
    let seed = (k + 1).min(n);
    let mut e = Vec::new();
    let mut ends: Vec<u32> = Vec::new();
    for a in 0..seed as u32 {
        for b in a + 1..seed as u32 {
            e.push((a, b));
            ends.extend([a, b]);
        }
    }
    let mut picked: Vec<u32> = Vec::with_capacity(k);
    for v in seed..n {
        picked.clear();
        while picked.len() < k {
            let t = if ends.is_empty() { rng.gen_range(0..v as u32) } else { ends[rng.gen_range(0..ends.len())] };
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            e.push((t, v as u32));
            ends.extend([t, v as u32]);
        }
    }
    Ok(e)
}

/// Random hitting-set instance in which every `u` has probability mass
/// `Σ_{v∈N(u)} 2^-k_v` in `[1, 10]`. Levels are uniform in
/// `0..=max_level`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingSpec {
    pub u: usize,
    pub v: usize,
    pub max_level: u32,
    #[serde(default)]
    pub seed: u64,
}

impl HittingSpec {
    pub fn label(&self) -> String {
        format!("hset:u={}:v={}:k={}:seed={}", self.u, self.v, self.max_level, self.seed)
    }
}

pub fn generate_hitting(spec: &HittingSpec) -> Result<BipartiteInstance> {
    if spec.v == 0 && spec.u > 0 {
        bail!("hitting instance needs V nodes");
    }
    let cap = dpar::scan::small_key_limit((spec.u + spec.v) as u64);
    if spec.max_level > cap {
        bail!("max level {} above ceil(log2 N) = {cap}", spec.max_level);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let level: Vec<u32> = (0..spec.v).map(|_| rng.gen_range(0..=spec.max_level)).collect();
    let mut edges = Vec::new();
    let mut imp = Vec::with_capacity(spec.u);
    let mut order: Vec<u32> = (0..spec.v as u32).collect();
    for u in 0..spec.u as u32 {
        imp.push(rng.gen_range(0.5..2.0));
        let target = rng.gen_range(1.0..10.0);
        order.shuffle(&mut rng);
        let mut sum = 0.0;
        for &x in &order {
            if sum >= target {
                break;
            }
            let p = pow2neg(level[x as usize]);
            if sum + p <= 10.0 {
                sum += p;
                edges.push((u, x));
            }
        }
        if sum < 1.0 {
            bail!("not enough probability mass in V for u {u}");
        }
    }
    Ok(BipartiteInstance::from_edges(imp, level, &edges, (spec.u + spec.v) as u64)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_four() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Complete, 4, None, 0)).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn gnm_exact_count() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Gnm, 100, Some(500), 7)).unwrap();
        assert_eq!(g.edge_count(), 500);
        let dense = generate_graph(&GraphSpec::new(GraphKind::Gnm, 20, Some(180), 7)).unwrap();
        assert_eq!(dense.edge_count(), 180);
    }

    #[test]
    fn gnm_infeasible() {
        assert!(generate_graph(&GraphSpec::new(GraphKind::Gnm, 10, Some(46), 0)).is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        for kind in [GraphKind::Gnm, GraphKind::Powerlaw] {
            let s = GraphSpec::new(kind, 300, Some(if kind == GraphKind::Gnm { 900 } else { 3 }), 11);
            assert_eq!(generate_graph(&s).unwrap(), generate_graph(&s).unwrap());
        }
    }

    #[test]
    fn grid_and_star() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Grid, 9, None, 0)).unwrap();
        assert_eq!(g.edge_count(), 12);
        let s = generate_graph(&GraphSpec::new(GraphKind::Star, 5, None, 0)).unwrap();
        assert_eq!(s.degree(0), 4);
    }

    #[test]
    fn powerlaw_counts() {
        let g = generate_graph(&GraphSpec::new(GraphKind::Powerlaw, 200, Some(3), 1)).unwrap();
        assert_eq!(g.edge_count(), 6 + 3 * 196);
    }

    #[test]
    fn hitting_mass_in_range() {
        let inst = generate_hitting(&HittingSpec { u: 50, v: 400, max_level: 6, seed: 2 }).unwrap();
        for s in inst.probability_sums() {
            assert!((1.0..=10.0).contains(&s), "{s}");
        }
    }

    #[test]
    fn spec_roundtrip() {
        let s: GraphSpec = "gnm:n=10:m=5:seed=3:w".parse().unwrap();
        assert_eq!(s.label().parse::<GraphSpec>().unwrap(), s);
    }
}
