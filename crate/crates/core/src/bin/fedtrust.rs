//! Command-line runner: simulate a preset, re-evaluate saved artifacts, or
//! compare two reports.

use clap::{Parser, Subcommand};
use fedtrust::exec::Execution;
use fedtrust::experiment::{self, ExperimentPreset};
use fedtrust::scoring::{self, Format, WeightConfig};
use fedtrust::sim::RunStatistics;
use fedtrust::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fedtrust", version, about = "Federated-learning simulator with trust scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a federation and write stats, model, FactSheet and trust report.
    Simulate {
        /// Built-in preset: exp1, exp2, exp3 or exp4.
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        /// Experiment TOML file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "runs/latest")]
        out: PathBuf,
        /// Format of the report printed to stdout.
        #[arg(long, default_value = "text")]
        format: Format,
        /// TOML file with a `[weights]` section; overrides the preset's weights.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        enable_discrimination_index: bool,
        /// Train clients one after another instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
    /// Recompute a trust report from saved run artifacts.
    Evaluate {
        /// Run directory; supplies defaults for the three artifact paths.
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long)]
        factsheet: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Directory for report.json and report.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        enable_discrimination_index: bool,
    },
    /// Per-pillar score deltas from report A to report B.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

fn artifact(explicit: Option<PathBuf>, run: Option<&Path>, file: &str) -> Result<PathBuf> {
    explicit
        .or_else(|| run.map(|r| r.join(file)))
        .ok_or_else(|| Error::input(format!("missing path for {file}: pass it explicitly or use --run")))
}

fn weights_or(path: Option<&Path>, fallback: WeightConfig) -> Result<WeightConfig> {
    path.map_or(Ok(fallback), experiment::load_weights)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            preset,
            config,
            seed,
            out,
            format,
            weights,
            enable_discrimination_index,
            sequential,
        } => {
            let mut p = match (preset, config) {
                (Some(name), _) => ExperimentPreset::builtin(&name)?,
                (None, Some(path)) => ExperimentPreset::load(&path)?,
                (None, None) => return Err(Error::input("pass --preset or --config")),
            };
            if let Some(s) = seed {
                p = p.with_seed(s);
            }
            p.weights = weights_or(weights.as_deref(), p.weights)?;
            p.federation.evaluation.enable_discrimination_index |= enable_discrimination_index;
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let artifacts = experiment::simulate(&p, exec)?;
            experiment::write_artifacts(&out, &artifacts)?;
            log::info!("artifacts written to {}", out.display());
            print!("{}", scoring::render(&artifacts.report, format));
        }
        Command::Evaluate {
            run,
            stats,
            factsheet,
            model,
            out,
            format,
            weights,
            enable_discrimination_index,
        } => {
            let run = run.as_deref();
            let stats: RunStatistics = experiment::read_json(&artifact(stats, run, experiment::STATS_FILE)?)?;
            let fs = experiment::read_factsheet(&artifact(factsheet, run, experiment::FACTSHEET_FILE)?)?;
            let model = experiment::read_json(&artifact(model, run, experiment::MODEL_FILE)?)?;
            let weights = weights_or(weights.as_deref(), WeightConfig::default())?;
            let mut settings = stats.config.evaluation;
            settings.enable_discrimination_index |= enable_discrimination_index;
            let report = experiment::evaluate(&stats, &fs, &model, &weights, &settings)?;
            if let Some(dir) = out {
                experiment::write_report(&dir, &report)?;
            }
            print!("{}", scoring::render(&report, format));
        }
        Command::Compare { a, b, format } => {
            let ra = experiment::read_report(&a)?;
            let rb = experiment::read_report(&b)?;
            let c = scoring::compare(&ra, &rb)?;
            print!("{}", scoring::render_comparison(&c, format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FEDTRUST_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
