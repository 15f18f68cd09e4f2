//! `qrisk`: run the amplitude-estimation risk experiments and write CSV and
//! JSON results.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tbill(a) => commands::tbill(a),
        Command::Portfolio(a) => commands::portfolio(a),
        Command::NoiseSweep(a) => commands::noise_sweep(a),
        Command::Convergence(a) => commands::convergence(a),
    };
    match result {
        Ok(out) => {
            for path in &out.written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
