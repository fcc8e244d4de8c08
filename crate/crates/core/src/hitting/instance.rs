use serde::{Deserialize, Serialize};

use crate::error::{malformed, Result};
use crate::par;
use crate::scan::offsets_from_counts;
use crate::work::WorkCounter;

/// Bipartite `U ⊔ V` graph with importances on `U` and probability levels
/// on `V` (`p_v = 2^-level[v]`). `n_bound` is the global size bound `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteInstance {
    pub u_offsets: Vec<usize>,
    pub u_adj: Vec<u32>,
    pub imp: Vec<f64>,
    pub level: Vec<u32>,
    pub n_bound: u64,
}

impl BipartiteInstance {
    /// Build from `(u, v)` edges; duplicate edges are dropped.
    pub fn from_edges(
        imp: Vec<f64>,
        level: Vec<u32>,
        edges: &[(u32, u32)],
        n_bound: u64,
    ) -> Result<Self> {
        let (nu, nv) = (imp.len(), level.len());
        let mut sorted: Vec<(u32, u32)> = edges.to_vec();
        for &(u, v) in &sorted {
            if u as usize >= nu || v as usize >= nv {
                return Err(malformed(format!("edge ({u},{v}) out of range")));
            }
        }
        sorted.sort_unstable();
        sorted.dedup();
        let mut counts = vec![0u64; nu];
        for &(u, _) in &sorted {
            counts[u as usize] += 1;
        }
        let u_offsets = offsets_from_counts(&counts, &WorkCounter::new())?;
        let u_adj = sorted.iter().map(|e| e.1).collect();
        let inst = BipartiteInstance { u_offsets, u_adj, imp, level, n_bound: n_bound.max((nu + nv) as u64) };
        inst.validate()?;
        Ok(inst)
    }

    pub fn u_count(&self) -> usize {
        self.imp.len()
    }

    pub fn v_count(&self) -> usize {
        self.level.len()
    }

    pub fn edge_count(&self) -> usize {
        self.u_adj.len()
    }

    pub fn nbrs(&self, u: usize) -> &[u32] {
        &self.u_adj[self.u_offsets[u]..self.u_offsets[u + 1]]
    }

    pub fn range(&self, u: usize) -> std::ops::Range<usize> {
        self.u_offsets[u]..self.u_offsets[u + 1]
    }

    pub fn validate(&self) -> Result<()> {
        let nu = self.u_count();
        if self.u_offsets.len() != nu + 1 || self.u_offsets[0] != 0 || self.u_offsets[nu] != self.u_adj.len() {
            return Err(malformed("bad U offsets"));
        }
        if self.u_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(malformed("U offsets must be nondecreasing"));
        }
        if self.imp.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(malformed("importances must be finite and nonnegative"));
        }
        let cap = crate::scan::small_key_limit(self.n_bound);
        if let Some(&k) = self.level.iter().find(|&&k| k > cap) {
            return Err(malformed(format!("level {k} above ceil(log2 N) = {cap}")));
        }
        for u in 0..nu {
            let nb = self.nbrs(u);
            if nb.iter().any(|&v| v as usize >= self.v_count()) {
                return Err(malformed(format!("neighbor of {u} out of range")));
            }
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(malformed(format!("neighbors of {u} not strictly sorted")));
            }
        }
        Ok(())
    }

    pub fn total_importance(&self) -> f64 {
        par::sum_f64(self.u_count(), |u| self.imp[u])
    }

    /// `Σ_{v∈N(u)} 2^-k_v` for every `u`.
    pub fn probability_sums(&self) -> Vec<f64> {
        par::map_range(self.u_count(), |u| {
            self.nbrs(u).iter().map(|&v| pow2neg(self.level[v as usize])).sum()
        })
    }

    /// Restriction to kept `U`/`V` nodes and kept edges, with compacted ids.
    /// Returns the instance and the new→old maps for `U` and `V`.
    pub fn restrict(
        &self,
        keep_u: &[bool],
        keep_v: &[bool],
        keep_edge: Option<&[bool]>,
        level: &[u32],
        work: &WorkCounter,
    ) -> Result<(BipartiteInstance, Vec<u32>, Vec<u32>)> {
        let u_map: Vec<u32> = (0..self.u_count()).filter(|&u| keep_u[u]).map(|u| u as u32).collect();
        let v_map: Vec<u32> = (0..self.v_count()).filter(|&v| keep_v[v]).map(|v| v as u32).collect();
        let mut v_new = vec![u32::MAX; self.v_count()];
        for (i, &v) in v_map.iter().enumerate() {
            v_new[v as usize] = i as u32;
        }
        let lists: Vec<Vec<u32>> = par::map_slice(&u_map, |&u| {
            self.range(u as usize)
                .filter(|&i| keep_edge.is_none_or(|k| k[i]) && keep_v[self.u_adj[i] as usize])
                .map(|i| v_new[self.u_adj[i] as usize])
                .collect()
        });
        work.charge("hitting", (self.u_adj.len() + self.u_count() + self.v_count()) as u64);
        let counts: Vec<u64> = lists.iter().map(|l| l.len() as u64).collect();
        let u_offsets = offsets_from_counts(&counts, work)?;
        let inst = BipartiteInstance {
            u_offsets,
            u_adj: lists.concat(),
            imp: u_map.iter().map(|&u| self.imp[u as usize]).collect(),
            level: v_map.iter().map(|&v| level[v as usize]).collect(),
            n_bound: self.n_bound,
        };
        Ok((inst, u_map, v_map))
    }

    /// `V → U` adjacency (CSR), `U` ids ascending within each block.
    pub fn transpose(&self, work: &WorkCounter) -> Result<(Vec<usize>, Vec<u32>)> {
        let mut counts = vec![0u64; self.v_count()];
        for &v in &self.u_adj {
            counts[v as usize] += 1;
        }
        let offsets = offsets_from_counts(&counts, work)?;
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; self.u_adj.len()];
        for u in 0..self.u_count() {
            for &v in self.nbrs(u) {
                adj[fill[v as usize]] = u as u32;
                fill[v as usize] += 1;
            }
        }
        work.charge("hitting", 2 * self.u_adj.len() as u64);
        Ok((offsets, adj))
    }
}

pub fn pow2neg(k: u32) -> f64 {
    (-(k as f64)).exp2()
}

/// Parse the `HSET1` text format.
///
/// ```text
/// HSET1
/// <|U|> <|V|> [N]
/// <u> <imp>      (|U| lines)
/// <v> <level>    (|V| lines)
/// <u> <v>        (one line per edge)
/// ```
pub fn parse_hset(text: &str) -> Result<BipartiteInstance> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some("HSET1") {
        return Err(malformed("missing HSET1 header"));
    }
    let counts: Vec<u64> = numbers(lines.next().ok_or_else(|| malformed("missing counts"))?)?;
    if counts.len() < 2 || counts.len() > 3 {
        return Err(malformed("count line needs |U| |V| [N]"));
    }
    let (nu, nv) = (counts[0] as usize, counts[1] as usize);
    let mut imp = vec![f64::NAN; nu];
    for _ in 0..nu {
        let l = lines.next().ok_or_else(|| malformed("truncated U section"))?;
        let mut it = l.split_whitespace();
        let u: usize = parse(it.next())?;
        let w: f64 = parse(it.next())?;
        *imp.get_mut(u).ok_or_else(|| malformed(format!("u id {u} out of range")))? = w;
    }
    let mut level = vec![u32::MAX; nv];
    for _ in 0..nv {
        let l = lines.next().ok_or_else(|| malformed("truncated V section"))?;
        let mut it = l.split_whitespace();
        let v: usize = parse(it.next())?;
        let k: u32 = parse(it.next())?;
        *level.get_mut(v).ok_or_else(|| malformed(format!("v id {v} out of range")))? = k;
    }
    if imp.iter().any(|x| x.is_nan()) || level.contains(&u32::MAX) {
        return Err(malformed("every U and V node needs exactly one line"));
    }
    let mut edges = Vec::new();
    for l in lines {
        let e: Vec<u64> = numbers(l)?;
        if e.len() != 2 {
            return Err(malformed(format!("bad edge line '{l}'")));
        }
        edges.push((e[0] as u32, e[1] as u32));
    }
    let n_bound = counts.get(2).copied().unwrap_or((nu + nv) as u64);
    BipartiteInstance::from_edges(imp, level, &edges, n_bound)
}

pub fn write_hset(inst: &BipartiteInstance) -> String {
    use std::fmt::Write;
    let mut s = String::from("HSET1\n");
    let (nu, nv) = (inst.u_count(), inst.v_count());
    if inst.n_bound == (nu + nv) as u64 {
        writeln!(s, "{nu} {nv}").unwrap();
    } else {
        writeln!(s, "{nu} {nv} {}", inst.n_bound).unwrap();
    }
    for (u, w) in inst.imp.iter().enumerate() {
        writeln!(s, "{u} {w}").unwrap();
    }
    for (v, k) in inst.level.iter().enumerate() {
        writeln!(s, "{v} {k}").unwrap();
    }
    for u in 0..nu {
        for &v in inst.nbrs(u) {
            writeln!(s, "{u} {v}").unwrap();
        }
    }
    s
}

fn numbers(l: &str) -> Result<Vec<u64>> {
    l.split_whitespace()
        .map(|t| t.parse().map_err(|_| malformed(format!("bad number '{t}'"))))
        .collect()
}

fn parse<T: std::str::FromStr>(t: Option<&str>) -> Result<T> {
    let t = t.ok_or_else(|| malformed("missing field"))?;
    t.parse().map_err(|_| malformed(format!("bad field '{t}'")))
}
