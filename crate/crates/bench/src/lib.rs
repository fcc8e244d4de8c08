//! Generators, file formats, oracles, reports and benchmark grids for
//! [`dpar`].

pub mod gen;
pub mod io;
pub mod report;
pub mod runner;
pub mod suite;
pub mod verify;

pub use gen::{generate_graph, generate_hitting, GraphKind, GraphSpec, HittingSpec};
pub use io::{Format, Input};
pub use report::RunReport;
pub use runner::{run, Algorithm, RunConfig};
pub use suite::{run_bench, scaling_cells, Cell, SuiteConfig};
pub use verify::{verify_output, Output, Verdict};
