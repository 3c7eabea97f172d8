use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rmi_cli::{
    execute, output_dir, parse_run_config, run_convergence_suite, sod_oracle_csv, CliError,
};

#[derive(Parser)]
#[command(
    name = "rmi",
    version,
    about = "WENO5 Euler solver for shock tubes and the air/SF6 Richtmyer-Meshkov tube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration file.
    Run { config: PathBuf },
    /// Run a configuration at several resolutions and compare.
    Converge {
        config: PathBuf,
        /// Points per wavelength (RMI runs).
        #[arg(long, value_delimiter = ',', conflicts_with = "cells")]
        ppw: Vec<usize>,
        /// Cell counts (shock tubes).
        #[arg(long, value_delimiter = ',')]
        cells: Vec<usize>,
    },
    /// Print an exact solution as CSV.
    Oracle {
        problem: OracleProblem,
        #[arg(long, default_value_t = 100)]
        cells: usize,
        #[arg(long, default_value_t = 2.0)]
        time: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleProblem {
    Sod,
}

fn load(path: &PathBuf) -> Result<rmi_cli::RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.clone(),
        source: e,
    })?;
    parse_run_config(&text)
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load(&config)?;
            let dir = output_dir(&cfg);
            let s = execute(&cfg, &dir)?;
            println!(
                "{}: {} steps to t={:e}; {} snapshots in {}",
                cfg.spec.name,
                s.steps,
                s.field.time,
                s.snapshots.len(),
                dir.display()
            );
        }
        Command::Converge { config, ppw, cells } => {
            let cfg = load(&config)?;
            let list = if ppw.is_empty() { cells } else { ppw };
            let dir = output_dir(&cfg);
            let report = run_convergence_suite(&cfg, &list, &dir)?;
            print!("{}", report.to_csv());
        }
        Command::Oracle {
            problem: OracleProblem::Sod,
            cells,
            time,
        } => {
            print!("{}", sod_oracle_csv(cells, time)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
