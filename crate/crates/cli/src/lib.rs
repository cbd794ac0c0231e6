//! Command-line front end for the `reconc` simulator.
//!
//! Every command prints one JSON [`output::Envelope`] on standard output.
//! Exit codes: 0 when every check passed, 1 on a verification or protocol
//! failure, 2 on a usage error.

pub mod commands;
pub mod output;
pub mod parse;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{Cli, Failure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli.command) {
        Ok(envelope) => {
            // ignore closed pipes
            let _ = writeln!(std::io::stdout().lock(), "{}", output::render(&envelope));
            if envelope.all_passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILED
        }
    }
}
