//! Declarative experiment runner for the eigenfunction laboratory: config
//! parsing, pipeline dispatch, CSV/JSON artifact emission, plot-data
//! projection, and the acceptance suite behind `selftest`.

pub mod acceptance;
pub mod artifacts;
pub mod config;
pub mod plotdata;
pub mod runner;

pub const TOOL_NAME: &str = "plancklab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
