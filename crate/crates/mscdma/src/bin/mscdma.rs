//! Command-line front door: `moments`, `sinr-sweep` and `montecarlo`
//! subcommands over a shared TOML experiment config.

use clap::{Args, Parser, Subcommand};
use mscdma::cli::{cmd_moments, cmd_montecarlo, cmd_sinr_sweep, Engine, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mscdma",
    version,
    about = "Large-system analysis of multistage CDMA detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; stdout when omitted (overrides output.path).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker pool size.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic moments R_ℓ and m^(ℓ) per engine.
    Moments {
        #[command(flatten)]
        common: Common,
        /// Engines to run: comma list of matrix|uniform-delay|small-bandwidth|polynomial, or "all".
        #[arg(long)]
        engines: Option<String>,
    },
    /// Scenario SINR curves along the configured sweep axis.
    SinrSweep {
        #[command(flatten)]
        common: Common,
    },
    /// Finite-system Monte Carlo validation against the asymptotics.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        /// Relative-error gate in percent (overrides montecarlo.gate_pct).
        #[arg(long)]
        gate: Option<f64>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> mscdma::Result<ExitCode> {
    let cli = Cli::parse();
    let (common, result): (&Common, _) = match &cli.command {
        Command::Moments { common, engines } => {
            setup(common)?;
            let cfg = ExperimentConfig::from_path(&common.config)?;
            let engines = engines.as_deref().map(Engine::parse_list).transpose()?;
            (
                common,
                Run::Csv(cmd_moments(&cfg, engines.as_deref())?, cfg),
            )
        }
        Command::SinrSweep { common } => {
            setup(common)?;
            let cfg = ExperimentConfig::from_path(&common.config)?;
            (common, Run::Csv(cmd_sinr_sweep(&cfg)?, cfg))
        }
        Command::Montecarlo { common, gate } => {
            setup(common)?;
            let cfg = ExperimentConfig::from_path(&common.config)?;
            let outcome = cmd_montecarlo(&cfg, *gate)?;
            (common, Run::MonteCarlo(outcome, cfg))
        }
    };
    match result {
        Run::Csv(csv, cfg) => {
            let path = out_path(common, &cfg);
            csv.write(path.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Run::MonteCarlo(outcome, cfg) => {
            let path = out_path(common, &cfg);
            outcome.csv.write(path.as_deref())?;
            if outcome.gate_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "gate failed: worst relative error {:.3}%",
                    outcome.worst_rel_error_pct
                );
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

enum Run {
    Csv(mscdma::cli::Csv, ExperimentConfig),
    MonteCarlo(mscdma::cli::MonteCarloOutcome, ExperimentConfig),
}

fn setup(common: &Common) -> mscdma::Result<()> {
    if let Some(jobs) = common.jobs {
        mscdma::cli::run::set_jobs(jobs);
    }
    Ok(())
}

fn out_path(common: &Common, cfg: &ExperimentConfig) -> Option<PathBuf> {
    common
        .out
        .clone()
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from))
}
