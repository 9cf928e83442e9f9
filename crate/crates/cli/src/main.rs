mod args;
mod commands;
mod config;
mod output;

use args::{Cli, Command};
use clap::Parser;
use commands::Failure;
use std::ffi::OsString;
use std::process::ExitCode;

fn parse(argv: &[OsString]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(argv).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(64)
        } else {
            ExitCode::SUCCESS
        }
    })
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    if let Some(n) = cli.command.common().threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?;
    }
    match &cli.command {
        Command::Stability(a) => commands::stability(a),
        Command::SweepEta(a) => commands::sweep_eta(a),
        Command::Dynamics(a) => commands::dynamics(a),
        Command::Subdivision(a) => commands::subdivision(a),
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let mut cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    if let Some(path) = cli.command.common().config.clone() {
        let entries = match config::load(&path) {
            Ok(e) => e,
            Err(e) => {
                eprintln!("meanforce: {}: {e}", path.display());
                return ExitCode::from(64);
            }
        };
        cli = match parse(&config::merge(&argv, &entries)) {
            Ok(cli) => cli,
            Err(code) => return code,
        };
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("meanforce {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
