//! Command line front end: `run`, `validate-config` and `list`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rainbow_ttd::experiments::{run_experiment, Experiment};
use rainbow_ttd::{Error, Result, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "rainbow-ttd", version, about = "Wideband PS/TTD beam training experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSVs and plotting script.
    Run {
        experiment: String,
        /// Scenario file; the experiment's shipped default when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a config value, e.g. `--set rx.n=32`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a scenario file parses and is self-consistent.
    ValidateConfig { path: PathBuf },
    /// List the available experiments.
    List,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { experiment, config, overrides, seed, out } => {
            let experiment: Experiment = experiment.parse()?;
            let mut cfg = match config {
                Some(path) => ScenarioConfig::load(&path)?,
                None => experiment.default_config()?,
            };
            for o in &overrides {
                cfg.apply_override(o)?;
            }
            if let Some(seed) = seed {
                cfg.base_seed = seed;
            }
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let output = run_experiment(experiment, &cfg)?;
            println!("{}", output.summary);
            for f in &output.files {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::ValidateConfig { path } => {
            let cfg = ScenarioConfig::load(&path)?;
            let scenario = Scenario::new(cfg)?;
            println!(
                "{}: ok ({} rx elements, {} directions x R = {}, {} of {} subcarriers loaded)",
                path.display(),
                scenario.rx.element_count(),
                scenario.book.direction_count(),
                scenario.book.diversity,
                scenario.ofdm.loaded_count(),
                scenario.ofdm.m_total
            );
        }
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<18} {}", e.name(), e.description());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &Error) -> u8 {
    e.exit_code() as u8
}
