//! Polynomial color reduction and weighted defective coloring.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::graph::Graph;
use crate::numtheory::{NumberTheoryTables, PrimeField};
use crate::par;
use crate::scan::radix_sort_u64;
use crate::work::WorkCounter;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<u64>,
    pub num_colors: u64,
    pub mono_weight: f64,
}

impl Coloring {
    /// Node ids as colors.
    pub fn identity(n: usize) -> Self {
        Coloring { colors: (0..n as u64).collect(), num_colors: n as u64, mono_weight: 0.0 }
    }

    pub fn distinct_colors(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

/// Number of edges whose endpoints share a color.
pub fn mono_edges(g: &Graph, colors: &[u64]) -> usize {
    par::sum_u64(g.node_count(), |v| {
        g.neighbors(v)
            .iter()
            .filter(|&&w| (w as usize) > v && colors[w as usize] == colors[v])
            .count() as u64
    }) as usize
}

/// Total weight of edges whose endpoints share a color.
pub fn mono_weight(g: &Graph, colors: &[u64]) -> f64 {
    par::sum_f64(g.node_count(), |v| {
        g.entry_range(v)
            .filter(|&i| {
                let w = g.adjacency()[i] as usize;
                w > v && colors[w] == colors[v]
            })
            .map(|i| g.weight_at(i))
            .sum()
    })
}

pub fn is_proper(g: &Graph, c: &Coloring) -> bool {
    c.colors.len() == g.node_count()
        && c.colors.iter().all(|&x| x < c.num_colors)
        && mono_edges(g, &c.colors) == 0
}

/// Smallest integer `r` with `r^3 >= k`.
fn ceil_cbrt(k: u64) -> u64 {
    let mut r = (k as f64).cbrt().floor() as u64;
    while r.saturating_mul(r).saturating_mul(r) < k {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= k {
        r -= 1;
    }
    r
}

fn target_prime_floor(k: u64, spread: u64) -> u64 {
    (3 * ceil_cbrt(k)).max(spread).max(1)
}

/// Base-`p` digits `(a, b, c)` of `q`, so that `f_q(x) = a x^2 + b x + c`.
fn poly(q: u64, p: u64) -> (u64, u64, u64) {
    let c = q % p;
    let b = ((q - c) / p) % p;
    let a = ((q - c - b * p) / (p * p)) % p;
    (a, b, c)
}

fn eval(f: (u64, u64, u64), x: u64, p: u64) -> u64 {
    (f.0 * x % p * x % p + f.1 * x % p + f.2) % p
}

/// Roots of `f_w - f_v` over `F_p`.
fn collision_points(fv: (u64, u64, u64), fw: (u64, u64, u64), field: &PrimeField) -> Result<([u64; 2], usize)> {
    let p = field.p;
    let d = ((fw.0 + p - fv.0) % p, (fw.1 + p - fv.1) % p, (fw.2 + p - fv.2) % p);
    field
        .quadratic_roots(d.0, d.1, d.2)
        .ok_or_else(|| contract("neighbors share a color"))
}

/// One polynomial color-reduction step.
///
/// Node `v` with color `q` evaluates `f_q` at the points
/// `0..3*outdeg(v)` and keeps the first point where no out-neighbor's
/// polynomial agrees. Its new color is `x * p + f_q(x)`.
pub fn reduce_colors_once(
    g: &Graph,
    current: &Coloring,
    delta: usize,
    tables: &NumberTheoryTables,
    work: &WorkCounter,
) -> Result<Coloring> {
    let n = g.node_count();
    if current.colors.len() != n {
        return Err(contract("coloring misaligned with graph"));
    }
    if g.max_out_degree() > delta {
        return Err(contract(format!("delta {delta} below the maximum out-degree")));
    }
    let k = current.num_colors.max(1);
    let p = tables.prime_in_range(target_prime_floor(k, 3 * delta as u64))?;
    if p.checked_mul(p).and_then(|x| x.checked_mul(p)).is_none_or(|x| x < k) {
        return Err(contract("prime too small to encode the palette"));
    }
    let field = tables.field(p)?;
    let colors = &current.colors;
    let picked: Vec<Result<u64>> = par::map_range(n, |v| {
        let q = colors[v];
        let fv = poly(q, p);
        let outs: Vec<u64> = g
            .entry_range(v)
            .filter(|&i| g.is_out(i))
            .map(|i| colors[g.adjacency()[i] as usize])
            .collect();
        let range = (3 * outs.len()).max(1);
        let mut lost = vec![false; range];
        for &qw in &outs {
            if qw == q {
                return Err(contract(format!("node {v} shares color {q} with an out-neighbor")));
            }
            let (roots, cnt) = collision_points(fv, poly(qw, p), field)?;
            for &x in &roots[..cnt] {
                if (x as usize) < range {
                    lost[x as usize] = true;
                }
            }
        }
        let x = lost
            .iter()
            .position(|&l| !l)
            .ok_or_else(|| contract(format!("no free evaluation point at node {v}")))?
            as u64;
        Ok(x * p + eval(fv, x, p))
    });
    work.charge("coloring", (g.adjacency().len() + n + 3 * g.adjacency().len()) as u64);
    let colors = picked.into_iter().collect::<Result<Vec<u64>>>()?;
    Ok(Coloring { colors, num_colors: p * p, mono_weight: 0.0 })
}

/// Proper coloring with `O(Δ^2)` colors, Δ the maximum out-degree.
///
/// Starts from node ids and repeats [`reduce_colors_once`] while the palette
/// shrinks.
pub fn color_delta_squared(g: &Graph, work: &WorkCounter) -> Result<Coloring> {
    let n = g.node_count();
    let mut cur = Coloring::identity(n);
    if n <= 1 {
        return Ok(cur);
    }
    let delta = g.max_out_degree();
    work.charge("coloring", g.adjacency().len() as u64);
    let limit = 2 * target_prime_floor(n as u64, 3 * delta as u64);
    let tables = NumberTheoryTables::new(limit);
    loop {
        let p = tables.prime_in_range(target_prime_floor(cur.num_colors, 3 * delta as u64))?;
        if p * p >= cur.num_colors {
            break;
        }
        cur = reduce_colors_once(g, &cur, delta, &tables, work)?;
    }
    debug_assert!(is_proper(g, &cur));
    Ok(cur)
}

/// Diagnostics from [`defective_coloring_traced`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DefectiveTrace {
    pub reduction_rounds: usize,
    pub planned_rounds: usize,
    pub phase1_lost_weight: f64,
    /// Nodes of degree at most `1/ε'` that still lost an edge in phase 1.
    pub low_degree_violations: usize,
}

pub fn defective_coloring(g: &Graph, eps: f64, work: &WorkCounter) -> Result<Coloring> {
    defective_coloring_traced(g, eps, work).map(|(c, _)| c)
}

fn reduction_rounds(n: usize) -> usize {
    let lg = (n.max(2) as f64).log2();
    if lg <= 1.0 {
        return 1;
    }
    (lg.ln() / 1.5f64.ln()).ceil().max(1.0) as usize
}

fn saturating_ceil(x: f64) -> u64 {
    if x >= 1e15 {
        1u64 << 50
    } else {
        x.ceil() as u64
    }
}

/// Coloring with at most `3*ceil(1/eps)` colors whose monochromatic edges
/// weigh at most `eps` times the total weight.
///
/// Phase 1 runs polynomial reduction rounds in which a node only avoids the
/// evaluation points carrying much neighbor weight; edges that collide are
/// dropped. Phase 2 orients the surviving edges from higher to lower color
/// and, class by class, gives each node the first palette color carrying
/// less than `eps/2` of its out-weight.
pub fn defective_coloring_traced(
    g: &Graph,
    eps: f64,
    work: &WorkCounter,
) -> Result<(Coloring, DefectiveTrace)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Infeasible(format!("defect parameter {eps} must be positive")));
    }
    let eps = eps.min(1.0);
    let n = g.node_count();
    let adj = g.adjacency();
    let mut trace = DefectiveTrace::default();
    let rounds = reduction_rounds(n);
    trace.planned_rounds = rounds;
    let eps_r = eps / (2.0 * rounds as f64);
    let span = saturating_ceil(1.0 / eps_r);
    let mut alive = vec![true; adj.len()];
    let mut colors: Vec<u64> = (0..n as u64).collect();
    let mut k = n as u64;
    let mut tables: Option<NumberTheoryTables> = None;

    for _ in 0..rounds {
        let floor = target_prime_floor(k, 3 * span);
        if (floor as f64) * (floor as f64) >= k as f64 {
            break;
        }
        let t = tables.get_or_insert_with(|| NumberTheoryTables::new(2 * floor));
        let p = t.prime_in_range(floor)?;
        if p * p >= k {
            break;
        }
        let field = t.field(p)?;
        let picked: Vec<Result<(u64, bool)>> = par::map_range(n, |v| {
            let q = colors[v];
            let fv = poly(q, p);
            let live: Vec<usize> = g.entry_range(v).filter(|&i| alive[i]).collect();
            let small = (live.len() as f64) <= 1.0 / eps_r;
            let range = if small { 3 * live.len() + 1 } else { 3 * span as usize };
            let mut hit = vec![0.0f64; range];
            let mut hits = vec![0u32; range];
            let mut total = 0.0;
            for &i in &live {
                let w = g.weight_at(i);
                total += w;
                let (roots, cnt) = collision_points(fv, poly(colors[adj[i] as usize], p), field)?;
                for &x in &roots[..cnt] {
                    if (x as usize) < range {
                        hit[x as usize] += w;
                        hits[x as usize] += 1;
                    }
                }
            }
            let x = if small {
                hits.iter().position(|&h| h == 0).unwrap()
            } else {
                let budget = eps_r * total;
                match hit.iter().position(|&h| h < budget) {
                    Some(x) => x,
                    None => argmin(&hit),
                }
            } as u64;
            Ok((x * p + eval(fv, x, p), small))
        });
        work.charge("coloring", (4 * adj.len() + n) as u64);
        let picked = picked.into_iter().collect::<Result<Vec<_>>>()?;
        let new_colors: Vec<u64> = picked.iter().map(|x| x.0).collect();
        let owners = g.owners();
        let collided: Vec<bool> = par::map_range(adj.len(), |i| {
            alive[i] && new_colors[owners[i] as usize] == new_colors[adj[i] as usize]
        });
        let lost_here = par::sum_f64(n, |v| {
            g.entry_range(v)
                .filter(|&i| collided[i] && (adj[i] as usize) > v)
                .map(|i| g.weight_at(i))
                .sum()
        });
        trace.low_degree_violations += (0..n)
            .filter(|&v| picked[v].1 && g.entry_range(v).any(|i| collided[i]))
            .count();
        trace.phase1_lost_weight += lost_here;
        for (a, c) in alive.iter_mut().zip(&collided) {
            *a &= !*c;
        }
        colors = new_colors;
        k = p * p;
        trace.reduction_rounds += 1;
    }

    let palette = saturating_ceil(1.0 / eps).saturating_mul(3);
    let mut order: Vec<(u64, u32)> = (0..n).map(|v| (colors[v], v as u32)).collect();
    radix_sort_u64(&mut order, work);
    let mut final_colors = vec![u64::MAX; n];
    let mut start = 0;
    while start < n {
        let c = order[start].0;
        let mut end = start;
        while end < n && order[end].0 == c {
            end += 1;
        }
        let class = &order[start..end];
        let choose = |&(_, v): &(u64, u32)| -> u64 {
            let v = v as usize;
            let outs: Vec<(u64, f64)> = g
                .entry_range(v)
                .filter(|&i| alive[i] && colors[adj[i] as usize] < colors[v])
                .map(|i| (final_colors[adj[i] as usize], g.weight_at(i)))
                .collect();
            if (outs.len() as u64) < palette {
                let mut used: Vec<u64> = outs.iter().map(|x| x.0).collect();
                used.sort_unstable();
                used.dedup();
                used.iter().enumerate().find(|&(i, &u)| u != i as u64).map_or(used.len(), |x| x.0) as u64
            } else {
                let mut acc = vec![0.0f64; palette as usize];
                let total: f64 = outs.iter().map(|x| x.1).sum();
                for &(col, w) in &outs {
                    acc[col as usize] += w;
                }
                let budget = eps / 2.0 * total;
                acc.iter().position(|&a| a < budget).unwrap_or_else(|| argmin(&acc)) as u64
            }
        };
        let chosen: Vec<u64> = if class.len() >= 1024 {
            par::map_slice(class, choose)
        } else {
            class.iter().map(choose).collect()
        };
        for (&(_, v), col) in class.iter().zip(chosen) {
            final_colors[v as usize] = col;
        }
        start = end;
    }
    work.charge("coloring", (adj.len() + n) as u64);

    let mono = mono_weight(g, &final_colors);
    let total = g.total_weight();
    if mono > eps * total {
        return Err(Error::Certificate(format!(
            "defective coloring: monochromatic weight {mono} exceeds {eps} * {total}"
        )));
    }
    Ok((Coloring { colors: final_colors, num_colors: palette, mono_weight: mono }, trace))
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}
