use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use haarlab_cli::{execute, Command, ExperimentConfig, Format};
use serde_json::Value;

/// Haar measure, product measure and uniqueness checks on exact groups.
#[derive(Parser)]
#[command(name = "haarlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Prehaar values, Cauchy gap and Haar bracket for one target set.
    HaarApprox,
    /// Product measures of regions in both slice orders, and Tonelli for --f.
    ProductCheck,
    /// Fubini integrability and the three-way equality for a vector step function.
    FubiniCheck,
    /// ν(A) against ν(K₀)·μ(A) for the Haar estimate μ.
    UniquenessCheck,
    /// Every property suite with the given seed.
    Selftest,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::HaarApprox => Command::HaarApprox,
            Cmd::ProductCheck => Command::ProductCheck,
            Cmd::FubiniCheck => Command::FubiniCheck,
            Cmd::UniquenessCheck => Command::UniquenessCheck,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

#[derive(clap::Args)]
struct Flags {
    /// JSON config; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    n_max: Option<u32>,
    /// ε-schedule preset, e.g. dyadic:10.
    #[arg(long, global = true)]
    schedule: Option<String>,
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// real_add, int_add, pos_mul, klein, symmetric:N, cyclic:N, or JSON.
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true)]
    k0: Option<String>,
    #[arg(long, global = true)]
    target: Option<String>,
    /// Measure as JSON, e.g. '{"type":"lebesgue","scale":"1"}'.
    #[arg(long, global = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    nu: Option<String>,
    /// 2-D function: inline JSON or a file path.
    #[arg(long, global = true)]
    f: Option<String>,
    /// List of sets or regions: inline JSON or a file path.
    #[arg(long, global = true)]
    sets: Option<String>,
    /// Restrict selftest to a suite; repeatable.
    #[arg(long = "suite", global = true)]
    suites: Vec<String>,
}

fn build(cli: Cli) -> Result<ExperimentConfig, haarlab_cli::CliError> {
    use haarlab_cli::CliError;
    let f = cli.flags;
    let mut cfg = match &f.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = cli.command {
        cfg.command = Some(c.into());
    }
    let text = |s: Option<String>| s.map(Value::String);
    cfg.group = text(f.group).or(cfg.group);
    cfg.k0 = text(f.k0).or(cfg.k0);
    cfg.target = text(f.target).or(cfg.target);
    cfg.mu = text(f.mu).or(cfg.mu);
    cfg.nu = text(f.nu).or(cfg.nu);
    cfg.f = text(f.f).or(cfg.f);
    cfg.sets = text(f.sets).or(cfg.sets);
    if let Some(n) = f.n_max {
        cfg.n_max = n;
    }
    if let Some(s) = f.schedule {
        cfg.schedule = s.parse().map_err(|e| CliError::Input(format!("--schedule: {e}")))?;
    }
    if let Some(t) = f.tolerance {
        cfg.tolerance = t.parse().map_err(|e| CliError::Input(format!("--tolerance: {e}")))?;
    }
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    if f.threads.is_some() {
        cfg.threads = f.threads;
    }
    if f.out.is_some() {
        cfg.out = f.out;
    }
    if let Some(fmt) = f.format {
        cfg.format = fmt;
    }
    if !f.suites.is_empty() {
        cfg.suites = Some(f.suites);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match build(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("haarlab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    ExitCode::from(execute(&cfg) as u8)
}
