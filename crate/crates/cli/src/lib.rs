//! Command-line front end: parses operator files, runs the built-in models
//! and renders reports.

pub mod commands;
pub mod io;
pub mod report;
pub mod suite;

pub use commands::{run, Cli, Command, RunConfig};
pub use io::{parse_pauli_file, write_atomic};
pub use report::{Format, Report};
