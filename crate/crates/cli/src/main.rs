mod commands;
mod config;
mod reference;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AtlasArgs, LogisticArgs};
use config::{Invalid, Params, Settings};

/// Stability regions and simulations of fractional difference equations.
#[derive(Debug, Parser)]
#[command(name = "fracstab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the boundary locus (CSV, JSON or SVG).
    Boundary(Params),
    /// Classify a parameter by its winding number; prints JSON.
    Classify(Params),
    /// Simulate the linear model and classify the trajectory.
    Simulate(Params),
    /// First and second bifurcation values of a.
    Bifurcations(Params),
    /// Stable interval of a real parameter.
    Interval(Params),
    /// Logistic map: equilibria, simulation, or the a* scan.
    Logistic {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        extra: LogisticArgs,
    },
    /// Stable band of the real axis as a sweeps a grid.
    Atlas {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        extra: AtlasArgs,
    },
    /// Recompute every reference case and write a pass/fail report.
    #[command(visible_alias = "reproduce-paper")]
    Reproduce {
        #[command(flatten)]
        params: Params,
        /// Report directory.
        #[arg(long = "dir", default_value = "reproduce-out")]
        dir: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Boundary(p) => commands::boundary(&Settings::resolve(&p)?)?,
        Command::Classify(p) => commands::classify(&Settings::resolve(&p)?)?,
        Command::Simulate(p) => commands::simulate(&Settings::resolve(&p)?)?,
        Command::Bifurcations(p) => commands::bifurcations(&Settings::resolve(&p)?)?,
        Command::Interval(p) => commands::interval(&Settings::resolve(&p)?)?,
        Command::Logistic { params, extra } => commands::logistic(&Settings::resolve(&params)?, &extra)?,
        Command::Atlas { params, extra } => commands::atlas(&Settings::resolve(&params)?, &extra)?,
        Command::Reproduce { params, dir } => {
            if !reproduce::run(&Settings::resolve(&params)?, &dir)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<std::io::Error>()) {
        3
    } else if err.is::<Invalid>() || err.is::<fracstab::Error>() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
