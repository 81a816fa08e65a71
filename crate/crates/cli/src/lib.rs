//! Input language, reports and command dispatch for the `fibkit` binary.

pub mod commands;
pub mod document;
pub mod dot;
pub mod error;
pub mod report;
pub mod syntax;

pub use commands::{run, Cli, Outcome};
pub use error::CliError;

/// Parses arguments and runs, mapping every error to a printable message and
/// exit code 1. Help and version requests exit 0.
pub fn main_with_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, code, stderr: String::new() }
            } else {
                Outcome { stdout: String::new(), code, stderr: text }
            };
        }
    };
    match run(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), code: 1, stderr: format!("error: {e}\n") },
    }
}
