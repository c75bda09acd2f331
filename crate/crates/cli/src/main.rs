use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = hodyn_cli::args::Cli::parse();
    hodyn_cli::run::dispatch(cli)
}
