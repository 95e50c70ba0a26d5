//! The `synchro` command-line tool as a library, so tests can drive commands without
//! spawning processes.

pub mod commands;
pub mod config;

use std::fmt;

use synchro_core::ErrorKind;

pub use commands::{execute, Cli, Command};

/// A command line that parses but cannot be carried out as given.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit status for a failed run: 3 when inputs disagree with each other, 2 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let core = err.chain().find_map(|e| e.downcast_ref::<synchro_core::Error>());
    match core.map(synchro_core::Error::kind) {
        Some(ErrorKind::Consistency) => 3,
        _ => 2,
    }
}
