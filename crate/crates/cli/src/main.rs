use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    frel_cli::run(frel_cli::Cli::parse())
}
