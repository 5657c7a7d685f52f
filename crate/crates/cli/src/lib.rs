//! Command-line front end and HTTP service for `trustsample`.

pub mod args;
pub mod commands;
pub mod service;

use std::fmt;
use std::io::Write;

pub use args::Cli;

/// Exit code for a caller mistake: bad flags, alpha, strategy or preset id.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for unreadable or invalid data documents.
pub const EXIT_DATA: u8 = 3;

/// A failed command: the process exit code and the message for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<trustsample::Error> for Failure {
    fn from(e: trustsample::Error) -> Self {
        if e.is_config() {
            Failure::config(e.to_string())
        } else {
            Failure::data(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::data(e.to_string())
    }
}

/// Runs a parsed command line, writing reports to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match commands::dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
