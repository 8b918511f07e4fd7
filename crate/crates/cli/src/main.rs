use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use optospring_cli::verify::{DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL};
use optospring_cli::{
    run_budget, run_optimize, run_sweep, run_verify, CliError, Report, RunConfig,
};

const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "optospring",
    version,
    about = "Quantum noise budgets for optomechanical force sensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Noise budget per grid frequency
    Budget {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add the network-oracle density as column S_oracle
        #[arg(long)]
        with_oracle: bool,
    },
    /// Summary statistic while stepping one parameter
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every closed form with the network oracle on random configurations
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the band-averaged density over chosen parameters
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    for w in &report.warnings {
        log::warn!("{w}");
    }
    match out {
        Some(path) => std::fs::write(path, &report.text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{}", report.text);
            Ok(())
        }
    }
}

fn with_config(
    config: &Path,
    out: Option<PathBuf>,
    run: impl FnOnce(&RunConfig) -> Result<Report, CliError>,
) -> Result<(), CliError> {
    let config = RunConfig::load(config)?;
    let report = run(&config)?;
    emit(&report, out.or_else(|| config.output.clone()).as_deref())
}

fn execute(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Budget {
            config,
            out,
            with_oracle,
        } => with_config(&config, out, |c| run_budget(c, with_oracle))?,
        Command::Sweep { config, out } => with_config(&config, out, run_sweep)?,
        Command::Optimize { config, out } => with_config(&config, out, run_optimize)?,
        Command::Verify {
            seed,
            samples,
            tol,
            out,
        } => {
            let outcome = run_verify(seed, samples as usize, tol);
            emit(&outcome.report, out.as_deref())?;
            if !outcome.passed() {
                for r in outcome.results.iter().filter(|r| r.max_rel_error > tol) {
                    log::error!(
                        "{}: max relative error {:e} exceeds {:e}",
                        r.formula.name(),
                        r.max_rel_error,
                        tol
                    );
                }
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
