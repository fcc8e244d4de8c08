//! Deterministic parallel graph algorithms built on local rounding.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`scan`], [`numtheory`], [`loss`] and [`work`] hold the
//!   shared primitives: CSR graphs, prefix sums and small-key sorting, prime
//!   and square-root tables, the iterative loss bound and the work counter.
//! * [`coloring`] has polynomial color reduction and defective coloring.
//! * [`rounding`] has the local rounding step and the max-cut warm-up.
//! * [`hitting`] has the hitting-set pipeline in both probability regimes.
//! * [`matching`] and [`mis`] build maximal matching and maximal independent
//!   set on top of everything above. [`mis::luby_mis_baseline`] is the
//!   randomized reference.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon.
//! Without it every loop runs sequentially and produces identical output.

pub mod coloring;
pub mod error;
pub mod graph;
pub mod hitting;
pub mod loss;
pub mod matching;
pub mod mis;
pub mod numtheory;
pub mod par;
pub mod params;
pub mod rounding;
pub mod scan;
pub mod work;

pub use error::{Error, Result};
pub use graph::Graph;
pub use params::{Mode, ParamSet};
pub use work::WorkCounter;
