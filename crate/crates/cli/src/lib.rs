//! Command-line front end: dataset files in, reports out.

pub mod app;
pub mod input;
pub mod report;

pub use app::{emit, run, Cli, CliError, Output, EXIT_INPUT_ERROR};
pub use report::ReportDocument;
