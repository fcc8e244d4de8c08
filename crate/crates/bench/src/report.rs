//! Versioned run reports, written as JSON and CSV.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use dpar::Mode;
use serde::{Deserialize, Serialize};

use crate::verify::{Certificate, Oracle};

pub const SCHEMA: &str = "v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    /// File path or generator label.
    pub source: String,
    /// `"graph"` or `"hitting"`.
    pub kind: String,
    pub nodes: usize,
    pub edges: usize,
    pub weighted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub input: InputDescriptor,
    pub algorithm: String,
    pub mode: Mode,
    pub threads: usize,
    /// Seed of the randomized baseline, if one ran.
    pub seed: Option<u64>,
    pub certificates: Vec<Certificate>,
    pub oracles: Vec<Oracle>,
    pub work: BTreeMap<String, u64>,
    pub work_total: u64,
    /// `work_total / (nodes + edges)`
    pub work_per_size: f64,
    pub wall_seconds: f64,
    /// Outer iterations (MIS, matching, baseline) or halving rounds (hitting).
    pub iterations: usize,
    /// Members, matched edges, selected nodes, colors or cut side size.
    pub output_size: usize,
    pub pass: bool,
}

/// Flat CSV row.
#[derive(Serialize)]
struct Row<'a> {
    schema: &'a str,
    source: &'a str,
    kind: &'a str,
    nodes: usize,
    edges: usize,
    algorithm: &'a str,
    mode: &'a str,
    threads: usize,
    seed: Option<u64>,
    work_total: u64,
    work_per_size: f64,
    wall_seconds: f64,
    iterations: usize,
    output_size: usize,
    certificates_held: usize,
    certificates: usize,
    oracles_passed: usize,
    oracles: usize,
    pass: bool,
}

pub fn to_csv(reports: &[RunReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if reports.is_empty() {
        // Header only.
        w.write_record([
            "schema", "source", "kind", "nodes", "edges", "algorithm", "mode", "threads", "seed", "work_total",
            "work_per_size", "wall_seconds", "iterations", "output_size", "certificates_held", "certificates",
            "oracles_passed", "oracles", "pass",
        ])?;
    }
    for r in reports {
        w.serialize(Row {
            schema: &r.schema,
            source: &r.input.source,
            kind: &r.input.kind,
            nodes: r.input.nodes,
            edges: r.input.edges,
            algorithm: &r.algorithm,
            mode: match r.mode {
                Mode::Paper => "paper",
                Mode::Desk => "desk",
            },
            threads: r.threads,
            seed: r.seed,
            work_total: r.work_total,
            work_per_size: r.work_per_size,
            wall_seconds: r.wall_seconds,
            iterations: r.iterations,
            output_size: r.output_size,
            certificates_held: r.certificates.iter().filter(|c| c.holds).count(),
            certificates: r.certificates.len(),
            oracles_passed: r.oracles.iter().filter(|o| o.pass).count(),
            oracles: r.oracles.len(),
            pass: r.pass,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn write_json(path: &Path, reports: &[RunReport]) -> Result<()> {
    let s = serde_json::to_string_pretty(reports)?;
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

pub fn write_csv(path: &Path, reports: &[RunReport]) -> Result<()> {
    std::fs::write(path, to_csv(reports)?).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json(path: &Path) -> Result<Vec<RunReport>> {
    let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))
}

/// JSON at `path` and CSV next to it with extension `csv`. A `.csv` path
/// puts the JSON at the `.json` sibling instead.
pub fn write_both(path: &Path, reports: &[RunReport]) -> Result<()> {
    let json = if path.extension().is_some_and(|e| e == "csv") { path.with_extension("json") } else { path.to_path_buf() };
    write_json(&json, reports)?;
    write_csv(&path.with_extension("csv"), reports)
}
