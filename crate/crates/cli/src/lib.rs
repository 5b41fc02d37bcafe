//! Command-line front end: reads a JSON problem description, runs one
//! analysis, and writes JSON, CSV and SVG reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod report;
pub mod spec;
pub mod svg;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::{CliError, CliResult};
