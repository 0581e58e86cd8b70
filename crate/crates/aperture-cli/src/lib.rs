//! Library surface of the `aperture-lab` executable: configuration
//! schemas, run-report plumbing, and the subcommand implementations.
//! The binary in `main.rs` is a thin argument-parsing shell over this.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use crate::report::{CheckResult, CsvTable, RunReport};

pub const DEFAULT_SEED: u64 = 0;

/// Environment variable capping worker parallelism.
pub const THREADS_ENV: &str = "APERTURE_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "aperture-lab",
    version,
    about = "Balance-search certificates and sector-record experiments"
)]
pub struct Cli {
    /// JSON experiment configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every stochastic component of the run.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output path (report JSON, or CSV table base name).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Assert the command's acceptance checks and set the exit code.
    #[arg(long, global = true, default_value_t = false)]
    pub check: bool,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural and representational balance search.
    Search,
    /// Complex envelope, boundary center, and context-free records.
    Boundary,
    /// Sector record process: exact tree or Monte Carlo sampling.
    Record,
    /// Singlet correlations, CHSH, no-signaling, interference.
    Bell,
    /// Claims-traceability table with live verification status.
    Trace,
}

/// Exit codes: 0 success, 1 operational/config error, 2 check failure.
pub fn execute(cli: &Cli) -> Result<i32> {
    configure_thread_pool()?;
    let started = Instant::now();
    let (report, tables, checks) = match cli.command {
        Command::Search => {
            let cfg: config::SearchConfig = config::load_or_default(cli.config.as_deref())?;
            let payload = commands::search::run(&cfg)?;
            eprintln!("search: {}", commands::search::summary(&payload));
            let checks = cli.check.then(|| commands::search::checks(&payload));
            (
                RunReport::new("search", cli.seed, &cfg, ms(started), &payload)?,
                commands::search::csv_tables(&payload),
                checks,
            )
        }
        Command::Boundary => {
            let cfg: config::BoundaryConfig = config::load_or_default(cli.config.as_deref())?;
            let payload = commands::boundary::run(&cfg, cli.seed)?;
            eprintln!("boundary: {}", commands::boundary::summary(&payload));
            let checks = cli
                .check
                .then(|| commands::boundary::checks(&payload, cli.seed));
            (
                RunReport::new("boundary", cli.seed, &cfg, ms(started), &payload)?,
                commands::boundary::csv_tables(&payload),
                checks,
            )
        }
        Command::Record => {
            let cfg: config::RecordConfig = config::load_or_default(cli.config.as_deref())?;
            let payload = commands::record::run(&cfg, cli.seed)?;
            eprintln!("record: {}", commands::record::summary(&payload));
            let checks = cli.check.then(|| commands::record::checks(&payload));
            (
                RunReport::new("record", cli.seed, &cfg, ms(started), &payload)?,
                commands::record::csv_tables(&payload),
                checks,
            )
        }
        Command::Bell => {
            let cfg: config::BellConfig = config::load_or_default(cli.config.as_deref())?;
            let payload = commands::bell::run(&cfg, cli.seed)?;
            eprintln!("bell: {}", commands::bell::summary(&payload));
            let checks = cli.check.then(|| commands::bell::checks(&payload));
            (
                RunReport::new("bell", cli.seed, &cfg, ms(started), &payload)?,
                commands::bell::csv_tables(&payload),
                checks,
            )
        }
        Command::Trace => {
            let cfg: config::TraceConfig = config::load_or_default(cli.config.as_deref())?;
            let payload = commands::trace::run(cli.seed)?;
            eprintln!("trace: {}", commands::trace::summary(&payload));
            let checks = cli.check.then(|| commands::trace::checks(&payload));
            (
                RunReport::new("trace", cli.seed, &cfg, ms(started), &payload)?,
                commands::trace::csv_tables(&payload),
                checks,
            )
        }
    };

    emit(cli, &report, &tables)?;

    if let Some(checks) = checks {
        let command = report.command.clone();
        if !report::report_checks(&command, &checks) {
            return Ok(2);
        }
    }
    Ok(0)
}

fn emit(cli: &Cli, report: &RunReport, tables: &[CsvTable]) -> Result<()> {
    match cli.format {
        OutputFormat::Json => report.write_json(cli.out.as_deref()),
        OutputFormat::Csv => report::write_csv_tables(tables, cli.out.as_deref()),
    }
}

fn ms(started: Instant) -> u64 {
    started.elapsed().as_millis() as u64
}

/// Applies the `APERTURE_LAB_THREADS` cap to the global worker pool.
/// Harmless when the pool is already initialized.
pub fn configure_thread_pool() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a positive integer"))?;
        if n == 0 {
            anyhow::bail!("{THREADS_ENV} must be a positive integer");
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Convenience used by tests: run checks for a command without going
/// through the process boundary.
pub fn run_checks(command: &Command, seed: u64) -> Result<Vec<CheckResult>> {
    Ok(match command {
        Command::Search => {
            let cfg = config::SearchConfig::default();
            commands::search::checks(&commands::search::run(&cfg)?)
        }
        Command::Boundary => {
            let cfg = config::BoundaryConfig::default();
            commands::boundary::checks(&commands::boundary::run(&cfg, seed)?, seed)
        }
        Command::Record => {
            let cfg = config::RecordConfig::default();
            commands::record::checks(&commands::record::run(&cfg, seed)?)
        }
        Command::Bell => {
            let cfg = config::BellConfig::default();
            commands::bell::checks(&commands::bell::run(&cfg, seed)?)
        }
        Command::Trace => commands::trace::checks(&commands::trace::run(seed)?),
    })
}
