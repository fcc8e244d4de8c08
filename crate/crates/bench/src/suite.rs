//! Benchmark grids.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dpar::{par, Mode, ParamSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gen::{generate_graph, generate_hitting, GraphKind, GraphSpec, HittingSpec};
use crate::io::Input;
use crate::report::{write_csv, write_json, RunReport};
use crate::runner::{run, Algorithm, RunConfig};

/// One grid point: an algorithm on a generated input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub graph: Option<GraphSpec>,
    #[serde(default)]
    pub hitting: Option<HittingSpec>,
    #[serde(default)]
    pub eps: Option<f64>,
    /// Baseline seed; defaults to the input seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Cell {
    pub fn on_graph(algorithm: Algorithm, graph: GraphSpec) -> Self {
        Cell { algorithm, graph: Some(graph), hitting: None, eps: None, seed: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default)]
    pub cells: Vec<Cell>,
    #[serde(default = "desk")]
    pub mode: Mode,
    /// Overrides the mode's parameter set.
    #[serde(default)]
    pub params: Option<ParamSet>,
    /// Run cells concurrently; results keep grid order.
    #[serde(default)]
    pub parallel_cells: bool,
    #[serde(default)]
    pub threads: Option<usize>,
}

fn desk() -> Mode {
    Mode::Desk
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { cells: Vec::new(), mode: Mode::Desk, params: None, parallel_cells: false, threads: None }
    }
}

impl SuiteConfig {
    pub fn param_set(&self) -> ParamSet {
        self.params.clone().unwrap_or_else(|| ParamSet::for_mode(self.mode))
    }
}

/// Deterministic MIS and the baseline on `gnm` graphs with
/// `n = 2^from ..= 2^to` and `m = density · n`.
pub fn scaling_cells(from: u32, to: u32, density: usize, seed: u64) -> Vec<Cell> {
    let mut cells = Vec::new();
    for k in from..=to {
        let n = 1usize << k;
        let spec = GraphSpec::new(GraphKind::Gnm, n, Some(density * n), seed + k as u64);
        cells.push(Cell::on_graph(Algorithm::Mis, spec.clone()));
        cells.push(Cell::on_graph(Algorithm::Luby, spec));
    }
    cells
}

pub fn run_cell(cell: &Cell, params: &ParamSet) -> Result<RunReport> {
    let (input, source, input_seed) = match (&cell.graph, &cell.hitting) {
        (Some(g), None) => (Input::Graph(generate_graph(g)?), g.label(), g.seed),
        (None, Some(h)) => (Input::Hitting(generate_hitting(h)?), h.label(), h.seed),
        _ => bail!("a cell needs exactly one of graph / hitting"),
    };
    let mut cfg = RunConfig::new(cell.algorithm, params.clone());
    if let Some(e) = cell.eps {
        cfg.eps = e;
    }
    cfg.seed = cell.seed.unwrap_or(input_seed);
    let (report, _) = run(&input, &source, &cfg).with_context(|| format!("{} on {source}", cell.algorithm.name()))?;
    Ok(report)
}

/// Run every cell and, with `out_dir`, write `reports.json` and
/// `reports.csv` there.
pub fn run_bench(cfg: &SuiteConfig, out_dir: Option<&Path>) -> Result<Vec<RunReport>> {
    let params = cfg.param_set();
    params.validate()?;
    let body = || -> Result<Vec<RunReport>> {
        if cfg.parallel_cells {
            cfg.cells.par_iter().map(|c| run_cell(c, &params)).collect()
        } else {
            cfg.cells.iter().map(|c| run_cell(c, &params)).collect()
        }
    };
    let reports = match cfg.threads {
        Some(t) => par::with_threads(t, body)?,
        None => body()?,
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_json(&dir.join("reports.json"), &reports)?;
        write_csv(&dir.join("reports.csv"), &reports)?;
    }
    Ok(reports)
}
