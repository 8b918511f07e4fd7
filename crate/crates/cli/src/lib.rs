//! Batch front end for optospring: TOML configs in, CSV tables out.
//!
//! Commands are plain functions returning the rendered output so they can
//! be driven from tests as well as from the `optospring` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod model;
pub mod table;
pub mod verify;

pub use commands::{run_budget, run_optimize, run_sweep, BUDGET_COLUMNS};
pub use config::RunConfig;
pub use error::{CliError, Result};
pub use table::Report;
pub use verify::{run_verify, VerifyOutcome};
