//! Evidence documents and the batch commands behind the `tbm` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod format;

pub use commands::{combine, condition_cmd, query, trace, Options, Outcome, Status};
pub use document::{EvidenceDocument, ScriptDocument};
pub use error::CliError;
