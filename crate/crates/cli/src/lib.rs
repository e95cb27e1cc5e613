//! Command-line surface over the `intform` engine.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

pub use args::Cli;
pub use commands::Outcome;
pub use error::CliError;

/// Runs a parsed command line, writing the report to `stdout` (or the
/// `--out` file) and diagnostics to `stderr`. Returns the exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdout, stderr) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let (outcome, output) = cli.command.run()?;
    let text = table::render(&outcome.records, output.format)?;
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    for d in &outcome.diagnostics {
        writeln!(stderr, "{d}")?;
    }
    Ok(outcome.status)
}
