//! Experiments, file formats and the command-line front end for the
//! `pqbd-core` operator library.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod function;
pub mod svg;
pub mod table;

pub use config::ExperimentConfig;
pub use error::{RunError, RunResult};
