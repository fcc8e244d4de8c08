use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dpar::{par, Mode, ParamSet};
use dpar_bench::io::{load, Format, Input};
use dpar_bench::report::{write_both, RunReport};
use dpar_bench::runner::{run, Algorithm, RunConfig};
use dpar_bench::suite::{run_bench, scaling_cells, SuiteConfig};
use dpar_bench::{generate_graph, GraphSpec};

#[derive(Parser)]
#[command(name = "dpar", version, about = "Deterministic parallel graph algorithms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Input file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "edgelist")]
    format: Format,
    /// Generate the input instead: `kind:n=<n>[:m=<m>][:seed=<s>][:w]`.
    #[arg(long, global = true, conflicts_with = "input")]
    generate: Option<GraphSpec>,
    /// JSON parameter set; overrides --mode.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_mode, default_value = "desk")]
    mode: Mode,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed of the randomized baseline.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report path; JSON there, CSV beside it.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Write the raw output as JSON.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Proper O(Δ²) coloring.
    Color,
    /// Defective coloring.
    Defective {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Cut of weight at least (1/2 − ε)Σw.
    Maxcut {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Hitting set on an HSET1 instance.
    HittingSet,
    /// Maximal matching.
    Matching,
    /// Maximal independent set.
    Mis {
        /// Run the randomized baseline instead.
        #[arg(long)]
        luby: bool,
    },
    /// Run a grid from a JSON suite file, or a gnm scaling series.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scaling series over n = 2^from ..= 2^to with m = density·n.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        scaling: Option<Vec<u32>>,
        #[arg(long, default_value_t = 8)]
        density: usize,
        #[arg(long)]
        parallel_cells: bool,
        /// Directory for reports.json and reports.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "paper" => Ok(Mode::Paper),
        "desk" => Ok(Mode::Desk),
        _ => Err(format!("unknown mode '{s}' (paper, desk)")),
    }
}

fn params(g: &Global) -> Result<ParamSet> {
    let p = match &g.params {
        Some(path) => {
            let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ParamSet::for_mode(g.mode),
    };
    p.validate()?;
    Ok(p)
}

fn print_summary(reports: &[RunReport]) {
    for r in reports {
        println!(
            "{:<12} {:<40} n={:<8} m={:<9} work={:<12} work/(n+m)={:<8.2} {:.3}s {}",
            r.algorithm,
            r.input.source,
            r.input.nodes,
            r.input.edges,
            r.work_total,
            r.work_per_size,
            r.wall_seconds,
            if r.pass { "PASS" } else { "FAIL" }
        );
        for c in r.certificates.iter().filter(|c| !c.holds) {
            println!("  certificate {} failed: {} {} {}", c.name, c.measured, c.sense, c.bound);
        }
        for o in r.oracles.iter().filter(|o| !o.pass) {
            println!("  oracle {} failed: {}", o.name, o.detail);
        }
    }
}

fn single(g: &Global, alg: Algorithm, eps: Option<f64>) -> Result<Vec<RunReport>> {
    let (input, source) = match (&g.input, &g.generate) {
        (Some(path), None) => (load(path, g.format)?, path.display().to_string()),
        (None, Some(spec)) => (Input::Graph(generate_graph(spec)?), spec.label()),
        _ => bail!("give --input or --generate"),
    };
    let mut cfg = RunConfig::new(alg, params(g)?);
    cfg.seed = g.seed;
    if let Some(e) = eps {
        cfg.eps = e;
    }
    let (report, output) = run(&input, &source, &cfg)?;
    if let Some(path) = &g.output {
        std::fs::write(path, serde_json::to_string(&output)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(vec![report])
}

fn execute(cli: &Cli) -> Result<Vec<RunReport>> {
    let g = &cli.global;
    match &cli.command {
        Command::Color => single(g, Algorithm::Color, None),
        Command::Defective { eps } => single(g, Algorithm::Defective, Some(*eps)),
        Command::Maxcut { eps } => single(g, Algorithm::Maxcut, Some(*eps)),
        Command::HittingSet => single(g, Algorithm::HittingSet, None),
        Command::Matching => single(g, Algorithm::Matching, None),
        Command::Mis { luby } => single(g, if *luby { Algorithm::Luby } else { Algorithm::Mis }, None),
        Command::Bench { config, scaling, density, parallel_cells, out_dir } => {
            let mut suite = match config {
                Some(path) => {
                    let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))?
                }
                None => SuiteConfig { mode: g.mode, ..Default::default() },
            };
            if let Some(s) = scaling {
                suite.cells.extend(scaling_cells(s[0], s[1], *density, g.seed));
            }
            if g.params.is_some() {
                suite.params = Some(params(g)?);
            }
            suite.parallel_cells |= *parallel_cells;
            run_bench(&suite, out_dir.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.global.threads {
        Some(t) => par::with_threads(t, || execute(&cli)),
        None => execute(&cli),
    };
    match result.and_then(|reports| {
        if let Some(path) = &cli.global.report {
            write_both(path, &reports)?;
        }
        Ok(reports)
    }) {
        Ok(reports) => {
            print_summary(&reports);
            if reports.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
