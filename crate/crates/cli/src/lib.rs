//! Configuration, dispatch and file output for the `shallowwave` binary.

pub mod config;
pub mod error;
pub mod run;

pub use config::{Command, RunConfig};
pub use error::CliError;
pub use run::{dispatch, Outcome};
