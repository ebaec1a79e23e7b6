use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use steklov::harness::{emit_plot_data, run_scenarios, ProfileDesc};
use steklov::radial::radial_mu1;

#[derive(Parser)]
#[command(name = "steklov", version, about = "Steklov eigenvalue solvers and bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in a config file and write JSON reports plus summary.csv.
    Run {
        /// Path to the JSON scenario config.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for reports.
        #[arg(long)]
        out: PathBuf,
        /// Execute scenarios on a thread pool (reports are identical either way).
        #[arg(long)]
        parallel: bool,
    },
    /// Flatten a report directory into plot_data.csv, ordered by sweep parameter.
    PlotData {
        /// Directory containing per-scenario JSON reports.
        #[arg(long)]
        reports: PathBuf,
    },
    /// One-shot radial eigenvalue solve; prints the result as JSON.
    Mu1 {
        /// Inline profile descriptor, e.g.
        /// '{"family":"constant","k":1.0,"n":2,"R":0.7853981633974483}'.
        #[arg(long)]
        profile: String,
        /// Radial integration steps.
        #[arg(long, default_value_t = steklov::radial::DEFAULT_STEPS)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, parallel } => match run_scenarios(&config, &out, parallel) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::PlotData { reports } => match emit_plot_data(&reports) {
            Ok(path) => {
                println!("{}", path.display());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Command::Mu1 { profile, steps } => {
            let run = || -> steklov::Result<String> {
                let desc: ProfileDesc = serde_json::from_str(&profile).map_err(|e| {
                    steklov::Error::Config(format!("malformed profile descriptor: {e}"))
                })?;
                let result = radial_mu1(&desc.to_profile()?, steps)?;
                Ok(serde_json::to_string_pretty(&result)?)
            };
            match run() {
                Ok(text) => {
                    println!("{text}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
