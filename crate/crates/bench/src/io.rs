//! Edge-list text, `DPAR1` binary CSR and `HSET1` readers and writers.
//!
//! `DPAR1` layout, all little-endian:
//!
//! ```text
//! b"DPAR1" | n: u64 | m: u64 | offsets: (n+1) × u64 | neighbors: 2m × u32 | [weights: 2m × f64]
//! ```
//!
//! `m` counts undirected edges; the weights block is present iff bytes
//! remain after the neighbors.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use dpar::hitting::{parse_hset, write_hset, BipartiteInstance};
use dpar::Graph;
use serde::{Deserialize, Serialize};

const MAGIC: &[u8; 5] = b"DPAR1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Edgelist,
    Csr,
    Hset,
}

#[derive(Clone, Debug)]
pub enum Input {
    Graph(Graph),
    Hitting(BipartiteInstance),
}

/// Parse `u v [w]` lines. `#` starts a comment. Node count is the largest id
/// plus one. If any line carries a weight, lines without one weigh 1.
pub fn parse_edgelist(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut weighted = false;
    let mut n = 0usize;
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 2 || f.len() > 3 {
            bail!("line {}: expected 'u v [w]', got '{line}'", no + 1);
        }
        let u: u32 = f[0].parse().with_context(|| format!("line {}: bad node id", no + 1))?;
        let v: u32 = f[1].parse().with_context(|| format!("line {}: bad node id", no + 1))?;
        let w = match f.get(2) {
            Some(t) => {
                weighted = true;
                let w: f64 = t.parse().with_context(|| format!("line {}: bad weight", no + 1))?;
                if !(w >= 0.0) || !w.is_finite() {
                    bail!("line {}: weight must be finite and nonnegative", no + 1);
                }
                w
            }
            None => 1.0,
        };
        n = n.max(u as usize + 1).max(v as usize + 1);
        edges.push((u, v, w));
    }
    if weighted {
        Ok(Graph::from_weighted_edges(n, &edges)?)
    } else {
        let plain: Vec<(u32, u32)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        Ok(Graph::from_edges(n, &plain)?)
    }
}

pub fn write_edgelist(g: &Graph) -> String {
    let mut s = String::new();
    let weighted = g.weights().is_some();
    for (a, b, w) in g.edges() {
        if weighted {
            writeln!(s, "{a} {b} {w}").unwrap();
        } else {
            writeln!(s, "{a} {b}").unwrap();
        }
    }
    s
}

pub fn write_csr(g: &Graph) -> Vec<u8> {
    let adj = g.adjacency();
    let mut out = Vec::with_capacity(21 + 8 * g.offsets().len() + 12 * adj.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.node_count() as u64).to_le_bytes());
    out.extend_from_slice(&(g.edge_count() as u64).to_le_bytes());
    for &o in g.offsets() {
        out.extend_from_slice(&(o as u64).to_le_bytes());
    }
    for &v in adj {
        out.extend_from_slice(&v.to_le_bytes());
    }
    if let Some(w) = g.weights() {
        for &x in w {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        if self.buf.len() - self.pos < k {
            bail!("truncated CSR file at byte {}", self.pos);
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn read_csr(bytes: &[u8]) -> Result<Graph> {
    if bytes.len() < 21 || &bytes[..5] != MAGIC {
        bail!("missing DPAR1 header");
    }
    let mut r = Reader { buf: bytes, pos: 5 };
    let n = r.u64()? as usize;
    let m = r.u64()? as usize;
    let entries = m.checked_mul(2).context("edge count overflows")?;
    let need = n
        .checked_add(1)
        .and_then(|x| x.checked_mul(8))
        .and_then(|x| x.checked_add(entries.checked_mul(4)?))
        .context("header sizes overflow")?;
    if bytes.len() - r.pos < need {
        bail!("CSR file shorter than header promises");
    }
    let mut offsets = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        offsets.push(r.u64()? as usize);
    }
    let neighbors: Vec<u32> =
        r.take(4 * entries)?.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
    let rest = bytes.len() - r.pos;
    let weights = match rest {
        0 => None,
        x if x == 8 * entries => {
            Some(r.take(x)?.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        }
        _ => bail!("{rest} trailing bytes do not form a weights block"),
    };
    Ok(Graph::from_parts(offsets, neighbors, weights, None)?)
}

pub fn load(path: &Path, format: Format) -> Result<Input> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = || String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()));
    let input = match format {
        Format::Edgelist => Input::Graph(parse_edgelist(&text()?)?),
        Format::Csr => Input::Graph(read_csr(&bytes)?),
        Format::Hset => Input::Hitting(parse_hset(&text()?)?),
    };
    Ok(input)
}

pub fn save_graph(path: &Path, g: &Graph, format: Format) -> Result<()> {
    let bytes = match format {
        Format::Edgelist => write_edgelist(g).into_bytes(),
        Format::Csr => write_csr(g),
        Format::Hset => bail!("a graph cannot be written as HSET1"),
    };
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn save_hset(path: &Path, inst: &BipartiteInstance) -> Result<()> {
    std::fs::write(path, write_hset(inst)).with_context(|| format!("writing {}", path.display()))
}
