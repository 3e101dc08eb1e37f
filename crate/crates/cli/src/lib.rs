//! Batch runner for the haarlab checks: configuration, dispatch to the
//! library, and report emission. Exit codes: 0 when every check passes,
//! 1 when one fails, 2 on malformed input or an unwritable output.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, run_with_threads};
pub use config::{Command, ExperimentConfig, Format};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl From<haarlab_core::Error> for CliError {
    fn from(e: haarlab_core::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

/// Runs and emits; returns the process exit code.
pub fn execute(cfg: &ExperimentConfig) -> i32 {
    let report = match run_with_threads(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("haarlab: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = report.emit(cfg.format, cfg.out.as_deref()) {
        eprintln!("haarlab: {e}");
        return e.exit_code();
    }
    let s = &report.summary;
    eprintln!(
        "haarlab {}: {} pass, {} fail, {} unsupported, {} exempt",
        report.command, s.pass, s.fail, s.unsupported, s.exempt
    );
    report.exit_code()
}
