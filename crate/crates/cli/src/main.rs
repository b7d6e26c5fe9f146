mod args;
mod commands;
mod emit;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit status for invalid arguments or configuration.
const EXIT_USAGE: u8 = 2;
/// Exit status for numerical failures.
const EXIT_NUMERIC: u8 = 3;

/// An error caused by the caller's input rather than the numerics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<dualrail::Error>() {
        Some(dualrail::Error::Domain(_) | dualrail::Error::Lookup(_) | dualrail::Error::Config(_)) => EXIT_USAGE,
        Some(dualrail::Error::Io(_)) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = cli.global.init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
