//! Sweep and report engine behind the `seqmbqc-bench` binary.
//!
//! Every command validates its inputs, evaluates points on a rayon pool
//! and gathers results by grid index, so output files do not depend on
//! the thread count.

pub mod cavity;
pub mod cli;
pub mod config;
pub mod diamond;
pub mod formulas;
pub mod output;
pub mod sweep;

pub use config::{GateKind, Metric, ModelKind, ScenarioKind, SweepConfig, SweepSettings};
pub use sweep::{cmd_sweep, run_sweep, SweepRecord};
