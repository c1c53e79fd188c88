//! Configuration files, shipped channel fixtures, sweep and convergence
//! drivers, CSV output and the `thermoflux` command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod convergence;
pub mod fixtures;
pub mod output;
pub mod sweep;
pub mod units;

pub use config::{load_config, parse_config, ChannelConfig, ConfigError};
pub use sweep::{run_sweep, IvRow, SweepResult, SweepSpec, SweepVariable};
