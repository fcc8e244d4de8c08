//! Run one algorithm on one input and produce a verified report.

use std::time::Instant;

use anyhow::{bail, Result};
use dpar::coloring::{color_delta_squared, defective_coloring};
use dpar::hitting::hitting_set;
use dpar::matching::maximal_matching;
use dpar::mis::{luby_mis_baseline, maximal_independent_set};
use dpar::rounding::max_cut_half;
use dpar::{par, ParamSet, WorkCounter};
use serde::{Deserialize, Serialize};

use crate::io::Input;
use crate::report::{InputDescriptor, RunReport, SCHEMA};
use crate::verify::{verify_output, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Color,
    Defective,
    Maxcut,
    HittingSet,
    Matching,
    Mis,
    /// Randomized MIS baseline.
    Luby,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Color => "color",
            Algorithm::Defective => "defective",
            Algorithm::Maxcut => "maxcut",
            Algorithm::HittingSet => "hitting-set",
            Algorithm::Matching => "matching",
            Algorithm::Mis => "mis",
            Algorithm::Luby => "luby",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub params: ParamSet,
    /// Defect / cut slack for `defective` and `maxcut`.
    pub eps: f64,
    /// Seed of the randomized baseline.
    pub seed: u64,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, params: ParamSet) -> Self {
        RunConfig { algorithm, params, eps: 0.1, seed: 0 }
    }
}

pub fn describe(input: &Input, source: &str) -> InputDescriptor {
    match input {
        Input::Graph(g) => InputDescriptor {
            source: source.into(),
            kind: "graph".into(),
            nodes: g.node_count(),
            edges: g.edge_count(),
            weighted: g.weights().is_some(),
        },
        Input::Hitting(h) => InputDescriptor {
            source: source.into(),
            kind: "hitting".into(),
            nodes: h.u_count() + h.v_count(),
            edges: h.edge_count(),
            weighted: true,
        },
    }
}

/// Run, verify and report. The output is returned for serialization.
pub fn run(input: &Input, source: &str, cfg: &RunConfig) -> Result<(RunReport, Output)> {
    let work = WorkCounter::new();
    let start = Instant::now();
    let (output, iterations) = match (cfg.algorithm, input) {
        (Algorithm::HittingSet, Input::Hitting(inst)) => {
            let r = hitting_set(inst, &cfg.params, &work)?;
            let rounds = r.rounds;
            (Output::Hitting(r), rounds)
        }
        (Algorithm::HittingSet, Input::Graph(_)) => bail!("hitting-set needs an HSET1 input"),
        (_, Input::Hitting(_)) => bail!("{} needs a graph input", cfg.algorithm.name()),
        (alg, Input::Graph(g)) => match alg {
            Algorithm::Color => {
                let c = color_delta_squared(g, &work)?;
                (Output::Coloring { colors: c.colors, eps: None }, 0)
            }
            Algorithm::Defective => {
                let c = defective_coloring(g, cfg.eps, &work)?;
                (Output::Coloring { colors: c.colors, eps: Some(cfg.eps) }, 0)
            }
            Algorithm::Maxcut => (Output::Cut { side: max_cut_half(g, cfg.eps, &work)?, eps: cfg.eps }, 0),
            Algorithm::Matching => {
                let m = maximal_matching(g, &cfg.params, &work)?;
                let it = m.trace.len();
                (Output::Matching(m), it)
            }
            Algorithm::Mis => {
                let s = maximal_independent_set(g, &cfg.params, &work)?;
                let it = s.trace.len();
                (Output::IndependentSet(s), it)
            }
            Algorithm::Luby => {
                let s = luby_mis_baseline(g, cfg.seed, &work)?;
                let it = s.trace.len();
                (Output::IndependentSet(s), it)
            }
            Algorithm::HittingSet => unreachable!(),
        },
    };
    let wall_seconds = start.elapsed().as_secs_f64();
    let verdict = verify_output(input, &output, cfg.params.mode);
    let input_desc = describe(input, source);
    let size = (input_desc.nodes + input_desc.edges).max(1) as f64;
    let work_total = work.total();
    let report = RunReport {
        schema: SCHEMA.into(),
        algorithm: cfg.algorithm.name().into(),
        mode: cfg.params.mode,
        threads: par::current_threads(),
        seed: (cfg.algorithm == Algorithm::Luby).then_some(cfg.seed),
        certificates: verdict.certificates,
        oracles: verdict.oracles,
        work: work.per_phase(),
        work_total,
        work_per_size: work_total as f64 / size,
        wall_seconds,
        iterations,
        output_size: output_size(&output),
        pass: verdict.pass,
        input: input_desc,
    };
    Ok((report, output))
}

pub fn output_size(o: &Output) -> usize {
    match o {
        Output::Matching(m) => m.size(),
        Output::IndependentSet(s) => s.size(),
        Output::Hitting(h) => h.selected.iter().filter(|&&x| x).count(),
        Output::Coloring { colors, .. } => {
            let mut c = colors.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        }
        Output::Cut { side, .. } => side.iter().filter(|&&x| x).count(),
    }
}
