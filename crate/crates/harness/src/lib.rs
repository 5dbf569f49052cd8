//! Experiment driver for the matrix-game laboratory: adversary-vs-solver
//! lower-bound sweeps, upper-bound rate runs, statistical tail checks, a
//! definiteness threshold scan, and deterministic CSV/JSON reporting.

pub mod config;
pub mod instances;
pub mod lower;
pub mod report;
pub mod stats;
pub mod upper;

pub use config::{
    AlgoName, LowerConfig, LowerMode, PsdConfig, StatConfig, UpperConfig, UpperSource,
};
pub use lower::{run_lower_bound, RunSummary};
pub use stats::{psd_scan, stat_test_projected_gaussian};
pub use upper::{run_upper_rate, UpperSummary};
