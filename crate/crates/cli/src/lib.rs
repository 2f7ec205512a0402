//! Command-line front end: problem files in, JSON reports and CSV samples out.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use error::CliError;
