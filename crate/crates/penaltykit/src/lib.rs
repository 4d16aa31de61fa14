//! File formats, text grammars and the command line for `penaltykit-core`.
//!
//! The core crate is `no_std`; everything that touches text, files or
//! processes lives here.

pub mod circuit;
pub mod cli;
pub mod formats;
pub mod parse;
pub mod report;

pub use circuit::{parse_circuit, render_circuit, CircuitFile};
pub use cli::{exit, run, Cli, CliError};
pub use formats::{FormatError, HamiltonianDoc};
pub use parse::{parse_constraint, ParseError};
