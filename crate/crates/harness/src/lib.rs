//! Experiment runner for the `covertnet` models: configuration files,
//! built-in figure manifests, oracle self-checks, and CSV/SVG output.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod plot;
pub mod selftest;
pub mod table;

pub use error::{HarnessError, Result};
