use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use d2d_underlay::model::ScenarioKind;
use d2d_underlay_cli::commands::{assign_cmd, solve_cmd, sweep_cmd, verify_cmd, Status};

/// Power allocation and channel assignment for full- and half-duplex D2D
/// pairs underlaying a cellular uplink.
#[derive(Parser)]
#[command(name = "d2d-underlay", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn scenario(s: &str) -> Result<ScenarioKind, String> {
    ScenarioKind::from_label(s).ok_or_else(|| {
        let labels: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.label()).collect();
        format!("expected one of {}", labels.join(", "))
    })
}

#[derive(Subcommand)]
enum Command {
    /// Solve every scenario for one pair and one CU.
    Solve {
        /// Instance file with the six gains and optional parameters.
        instance: Option<PathBuf>,
        /// Draw the instance from the default deployment instead.
        #[arg(long, conflicts_with = "instance")]
        seed: Option<u64>,
        #[arg(long, value_parser = scenario)]
        scenario: Option<ScenarioKind>,
    },
    /// Run a Monte Carlo campaign and write its CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides master_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides trials.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Check the solvers against the brute-force grid oracle.
    Verify {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "grid-n", default_value_t = 50)]
        grid_n: usize,
        #[arg(long, value_parser = scenario)]
        scenario: Option<ScenarioKind>,
    },
    /// Best pair-to-channel assignment for a rate table in CSV form.
    Assign { table: PathBuf },
}

fn run(cli: Cli) -> Result<Status> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve {
            instance,
            seed,
            scenario,
        } => solve_cmd(instance.as_deref(), seed, scenario, &mut out),
        Command::Sweep {
            config,
            out: csv_path,
            seed,
            trials,
        } => {
            let mut log = io::stderr();
            match csv_path {
                Some(p) => {
                    let file = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    let mut w = BufWriter::new(file);
                    let status = sweep_cmd(&config, seed, trials, &mut w, &mut log)?;
                    w.flush()?;
                    Ok(status)
                }
                None => sweep_cmd(&config, seed, trials, &mut out, &mut log),
            }
        }
        Command::Verify {
            count,
            seed,
            grid_n,
            scenario,
        } => verify_cmd(count, seed, grid_n, scenario, &mut out),
        Command::Assign { table } => assign_cmd(&table, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Flagged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
