//! Experiment driver for randomized sampling and weighted least-squares
//! reconstruction: configuration, trial execution and output rendering.

pub mod commands;
pub mod config;
pub mod output;
pub mod setup;
pub mod stats;
pub mod trials;

use std::path::PathBuf;

use sgs_fourier_legendre::FlError;
use sgs_linalg::LinalgError;
use sgs_sampling::SamplingError;

use config::{CommandKind, ExperimentConfig, Plan};
use output::{write_outputs, Outputs};
use setup::Setup;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 2 for configuration, 3 for numerical and 1 for
    /// i/o failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<SamplingError> for CliError {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::DegenerateModel | SamplingError::Linalg(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<FlError> for CliError {
    fn from(e: FlError) -> Self {
        match e {
            FlError::InvalidArgument(_) => CliError::Config(e.to_string()),
            FlError::Sampling(inner) => inner.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Resolves `cfg` for `command`, runs it and renders every output file in
/// memory.
pub fn execute(command: CommandKind, cfg: ExperimentConfig) -> Result<Outputs, CliError> {
    let plan = Plan::resolve(command, cfg)?;
    execute_plan(plan)
}

fn execute_plan(plan: Plan) -> Result<Outputs, CliError> {
    let need_target = matches!(
        plan.command,
        CommandKind::Reconstruct | CommandKind::McGram | CommandKind::McCrossterm | CommandKind::Convergence
    );
    let setup = Setup::build(plan, need_target)?;
    match setup.plan.command {
        CommandKind::Reconstruct => commands::reconstruct::run(&setup)?.outputs(),
        CommandKind::McGram | CommandKind::McCrossterm => commands::montecarlo::run(&setup)?.outputs(),
        CommandKind::Convergence => commands::convergence::run(&setup)?.outputs(),
        CommandKind::Leverage => commands::leverage::run(&setup)?.outputs(),
        CommandKind::Bounds => commands::bounds::run(&setup)?.outputs(),
    }
}

/// Runs `command` and writes its outputs to the configured `out_path`.
/// Nothing is written unless the whole computation succeeds.
pub fn run(command: CommandKind, cfg: ExperimentConfig) -> Result<(PathBuf, Outputs), CliError> {
    let plan = Plan::resolve(command, cfg)?;
    let dir = plan
        .out_path
        .clone()
        .ok_or_else(|| CliError::Config("no output directory given (config `out_path` or --out)".into()))?;
    let outputs = execute_plan(plan)?;
    write_outputs(&dir, &outputs)?;
    Ok((dir, outputs))
}
