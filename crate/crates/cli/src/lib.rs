//! Command-line front end for `poincare-core`: text and JSON input, command
//! dispatch and deterministic reports.

pub mod commands;
pub mod formats;
pub mod parse;

pub use commands::{run, Command, InputError, Report, RunConfig, Status};
