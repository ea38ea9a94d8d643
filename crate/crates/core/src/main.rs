use std::process::ExitCode;

use clap::Parser;

use circuit_gp::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(status)
}
