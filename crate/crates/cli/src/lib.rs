//! Command-line front end: operator expressions, commands and renderers.

pub mod ast;
pub mod cli;
pub mod commands;
pub mod elaborate;
pub mod error;
pub mod output;
pub mod parser;

pub use cli::{Cli, Command, Format};
pub use commands::{run, CommandResult, Payload, Status};
pub use error::CliError;
pub use parser::{parse_operator, ParseError};

/// Runs a parsed command line: the payload goes to `stdout`, diagnostics to
/// `stderr`. Returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut impl std::io::Write, stderr: &mut impl std::io::Write) -> u8 {
    match run(&cli.command) {
        Ok(result) => {
            let text = output::render(&result, result.settings.format);
            if stdout.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            if result.status == Status::Fail {
                let _ = writeln!(stderr, "umbra: verification failed");
                4
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "umbra: {e}");
            e.exit_code()
        }
    }
}
