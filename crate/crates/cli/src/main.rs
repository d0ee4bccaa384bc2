mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use hypersphere_lab::Error;

use args::Cli;

/// Exit status for a failed run.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Indeterminate(_) | Error::PrecisionExhausted { .. } => 3,
        Error::GeneralPosition { .. } | Error::SpanViolation { .. } => 4,
        Error::InexactDivision { .. }
        | Error::Consistency(_)
        | Error::CorrespondenceMismatch { .. } => 5,
        Error::Generation(_) | Error::Resource(_) | Error::Degenerate(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
