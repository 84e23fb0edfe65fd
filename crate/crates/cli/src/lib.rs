//! Command-line front end for `fateq-core`: CSV tables, dimension sweeps
//! with SVG plots, and the `verify` suite.

pub mod commands;
pub mod csv;
pub mod error;
pub mod parse;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use error::CliError;
