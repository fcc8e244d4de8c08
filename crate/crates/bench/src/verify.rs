//! Full-scan oracles. Nothing here trusts bookkeeping carried inside a
//! result; every quantity is recomputed from the raw selection.

use dpar::coloring::mono_weight;
use dpar::hitting::{pow2neg, BipartiteInstance, HittingResult};
use dpar::matching::Matching;
use dpar::mis::IndependentSet;
use dpar::rounding::cut_weight;
use dpar::{Graph, Mode};
use serde::{Deserialize, Serialize};

use crate::io::Input;

/// Pass/fail of a structural property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A measured quantity against the bound of the run's mode, with the
/// proof-mode bound alongside when it differs or is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    /// `"le"` or `"ge"`: how `measured` must compare to `bound`.
    pub sense: String,
    pub measured: f64,
    pub bound: f64,
    pub proof_bound: Option<f64>,
    pub holds: bool,
}

impl Certificate {
    pub fn le(name: &str, measured: f64, bound: f64, proof_bound: Option<f64>) -> Self {
        Certificate { name: name.into(), sense: "le".into(), measured, bound, proof_bound, holds: measured <= bound }
    }

    pub fn ge(name: &str, measured: f64, bound: f64, proof_bound: Option<f64>) -> Self {
        Certificate { name: name.into(), sense: "ge".into(), measured, bound, proof_bound, holds: measured >= bound }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub oracles: Vec<Oracle>,
    pub certificates: Vec<Certificate>,
}

impl Verdict {
    fn oracle(&mut self, name: &str, pass: bool, detail: String) {
        self.oracles.push(Oracle { name: name.into(), pass, detail });
    }

    fn finish(mut self) -> Self {
        self.pass = self.oracles.iter().all(|o| o.pass) && self.certificates.iter().all(|c| c.holds);
        self
    }
}

/// Serializable algorithm output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Matching(Matching),
    IndependentSet(IndependentSet),
    Hitting(HittingResult),
    /// Proper coloring when `eps` is absent, defective otherwise.
    Coloring { colors: Vec<u64>, eps: Option<f64> },
    Cut { side: Vec<bool>, eps: f64 },
}

/// Hitting-set thresholds for a parameter mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingThresholds {
    pub importance: f64,
    pub max_c: f64,
}

impl HittingThresholds {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Desk => HittingThresholds { importance: 0.75, max_c: 1e3 },
            Mode::Paper => HittingThresholds { importance: 0.9, max_c: 1e3 },
        }
    }
}

pub fn verify_output(input: &Input, output: &Output, mode: Mode) -> Verdict {
    match (input, output) {
        (Input::Graph(g), Output::Matching(m)) => verify_matching(g, m),
        (Input::Graph(g), Output::IndependentSet(s)) => verify_independent_set(g, s),
        (Input::Graph(g), Output::Coloring { colors, eps: None }) => verify_proper_coloring(g, colors),
        (Input::Graph(g), Output::Coloring { colors, eps: Some(e) }) => verify_defective_coloring(g, colors, *e),
        (Input::Graph(g), Output::Cut { side, eps }) => verify_cut(g, side, *eps),
        (Input::Hitting(inst), Output::Hitting(r)) => verify_hitting(inst, r, HittingThresholds::for_mode(mode)),
        _ => {
            let mut v = Verdict::default();
            v.oracle("input_kind", false, "output does not match the input kind".into());
            v.finish()
        }
    }
}

pub fn verify_matching(g: &Graph, m: &Matching) -> Verdict {
    let n = g.node_count();
    let mut v = Verdict::default();
    let mut used = vec![false; n];
    let mut bad = 0usize;
    for &(a, b) in &m.edges {
        let (a, b) = (a as usize, b as usize);
        if a >= n || b >= n || a == b || g.neighbors(a).binary_search(&(b as u32)).is_err() {
            bad += 1;
            continue;
        }
        if used[a] || used[b] {
            bad += 1;
        }
        used[a] = true;
        used[b] = true;
    }
    let flags_ok = m.matched.len() == n && m.matched == used;
    v.oracle(
        "matching",
        bad == 0 && flags_ok,
        format!("{} edges, {bad} invalid or overlapping, matched flags {}", m.edges.len(), if flags_ok { "consistent" } else { "inconsistent" }),
    );
    let free = g.edges().iter().filter(|&&(a, b, _)| !used[a as usize] && !used[b as usize]).count();
    v.oracle("maximality", free == 0, format!("{free} edges with both endpoints free"));
    v.finish()
}

pub fn verify_independent_set(g: &Graph, s: &IndependentSet) -> Verdict {
    let n = g.node_count();
    let mut v = Verdict::default();
    if s.members.len() != n {
        v.oracle("independence", false, format!("membership vector has {} entries for {n} nodes", s.members.len()));
        return v.finish();
    }
    let inside = g.edges().iter().filter(|&&(a, b, _)| s.members[a as usize] && s.members[b as usize]).count();
    v.oracle("independence", inside == 0, format!("{} members, {inside} edges inside", s.size()));
    let undominated =
        (0..n).filter(|&x| !s.members[x] && !g.neighbors(x).iter().any(|&w| s.members[w as usize])).count();
    v.oracle("maximality", undominated == 0, format!("{undominated} nodes addable"));
    v.finish()
}

/// Palette bound of the `O(Δ²)` coloring: `max(36Δ², 36³)`.
pub fn proper_palette_bound(g: &Graph) -> f64 {
    let d = g.max_degree().max(1) as f64;
    (36.0 * d * d).max(36.0f64.powi(3))
}

pub fn verify_proper_coloring(g: &Graph, colors: &[u64]) -> Verdict {
    let mut v = Verdict::default();
    if colors.len() != g.node_count() {
        v.oracle("proper", false, "color vector length mismatch".into());
        return v.finish();
    }
    let mono = g.edges().iter().filter(|&&(a, b, _)| colors[a as usize] == colors[b as usize]).count();
    v.oracle("proper", mono == 0, format!("{mono} monochromatic edges"));
    let palette = colors.iter().max().map_or(0, |&c| c + 1) as f64;
    let bound = proper_palette_bound(g);
    v.certificates.push(Certificate::le("palette", palette, bound, Some(bound)));
    v.finish()
}

pub fn verify_defective_coloring(g: &Graph, colors: &[u64], eps: f64) -> Verdict {
    let mut v = Verdict::default();
    if colors.len() != g.node_count() {
        v.oracle("coloring", false, "color vector length mismatch".into());
        return v.finish();
    }
    let mut distinct = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let palette_bound = 3.0 * (1.0 / eps.min(1.0)).ceil();
    let total = g.total_weight();
    v.certificates.push(Certificate::le("palette", distinct.len() as f64, palette_bound, Some(palette_bound)));
    v.certificates.push(Certificate::le("mono_weight", mono_weight(g, colors), eps * total, Some(eps * total)));
    v.finish()
}

pub fn verify_cut(g: &Graph, side: &[bool], eps: f64) -> Verdict {
    let mut v = Verdict::default();
    if side.len() != g.node_count() {
        v.oracle("cut", false, "side vector length mismatch".into());
        return v.finish();
    }
    let bound = (0.5 - eps) * g.total_weight();
    v.certificates.push(Certificate::ge("cut_weight", cut_weight(g, side), bound, Some(bound)));
    v.finish()
}

/// Importance fraction of `U_good`, and for every good `u` the hit count
/// against `[0.5Σ − 0.5, CΣ + C]` with `Σ = Σ_{v∈N(u)} 2^-k_v`.
pub fn verify_hitting(inst: &BipartiteInstance, r: &HittingResult, t: HittingThresholds) -> Verdict {
    let mut v = Verdict::default();
    let (nu, nv) = (inst.u_count(), inst.v_count());
    if r.selected.len() != nv || r.u_good.len() != nu {
        v.oracle("shape", false, format!("selection {} / good {} for |V| {nv} / |U| {nu}", r.selected.len(), r.u_good.len()));
        return v.finish();
    }
    let total: f64 = inst.imp.iter().sum();
    let good: f64 = (0..nu).filter(|&u| r.u_good[u]).map(|u| inst.imp[u]).sum();
    let fraction = if total > 0.0 { good / total } else { 1.0 };
    let (mut c, mut shortfall) = (0.0f64, 0.0f64);
    for u in 0..nu {
        if !r.u_good[u] {
            continue;
        }
        let sigma: f64 = inst.nbrs(u).iter().map(|&x| pow2neg(inst.level[x as usize])).sum();
        let hits = inst.nbrs(u).iter().filter(|&&x| r.selected[x as usize]).count() as f64;
        c = c.max(hits / (sigma + 1.0));
        shortfall = shortfall.max(0.5 * sigma - 0.5 - hits);
    }
    v.certificates.push(Certificate::ge("importance_fraction", fraction, t.importance, Some(0.9)));
    v.certificates.push(Certificate::le("lower_shortfall", shortfall, 0.0, Some(0.0)));
    v.certificates.push(Certificate::le("measured_c", c, t.max_c, None));
    v.finish()
}
