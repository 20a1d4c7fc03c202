//! Library surface of the `opdef` command-line tool: file formats, the
//! base-specification parser, report assembly and the command
//! implementations. The binary in `main.rs` is a thin argument-parsing
//! wrapper around [`commands`].

pub mod basespec;
pub mod commands;
pub mod formats;
pub mod report;

/// Output format for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}
