//! Command-line front end for `motsheaf-core`: hypothesis reports, virtual
//! Betti tables, Hilbert-scheme Betti numbers, `s_L`, bound audits and
//! batch grids, rendered as text, JSON, CSV or LaTeX.

pub mod commands;
pub mod config;
pub mod document;
mod error;

pub use commands::{run, Outcome};
pub use config::{Cli, Format, Invocation, RunConfig};
pub use document::Document;
pub use error::CliError;
