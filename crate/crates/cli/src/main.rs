use std::process::ExitCode;

use clap::Parser;

mod args;
mod run;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match run::run(&cli.command, &cli.opts) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("zsys: {}: {f}", f.kind());
            ExitCode::from(2)
        }
    }
}
