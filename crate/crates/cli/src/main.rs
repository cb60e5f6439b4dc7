use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sgs_cli::config::{
    parse_counts, parse_epsilon, parse_m, parse_model, parse_p_spec, parse_target, CommandKind, ExperimentConfig,
};
use sgs_cli::CliError;

/// Randomized generalized sampling experiments.
#[derive(Parser)]
#[command(name = "sgs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One draw followed by a weighted least-squares reconstruction.
    Reconstruct(Common),
    /// Monte Carlo study of Gram-matrix deviations.
    McGram(Common),
    /// Monte Carlo study of cross-term deviations.
    McCrossterm(Common),
    /// Error decay across reconstruction dimensions.
    Convergence(Common),
    /// Leverage scores and the sampling distribution.
    Leverage(Common),
    /// Sample-size thresholds from the concentration bounds.
    Bounds(Common),
}

/// Flags shared by every subcommand; each overrides the matching config field.
#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed; trial `t` uses `seed + t`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Reconstruction dimension(s), e.g. `10` or `4,8,12`.
    #[arg(long)]
    n: Option<String>,
    /// Sample size(s) or a rule such as `rate_onb`.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// A number or `lambda0`.
    #[arg(long)]
    epsilon: Option<String>,
    /// `identity:D`, `fl:N:J:A`, `fl:J:A` or `custom:PATH`.
    #[arg(long)]
    model: Option<String>,
    /// `exp_c:C` or `pole_a:A`.
    #[arg(long)]
    target: Option<String>,
    /// `leverage`, `uniform` or comma-separated custom weights.
    #[arg(long = "p-spec")]
    p_spec: Option<String>,
}

impl Common {
    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.out {
            cfg.out_path = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.base_seed = Some(v);
        }
        if let Some(v) = self.trials {
            cfg.trials = Some(v);
        }
        if let Some(v) = self.n {
            cfg.n = Some(parse_counts(&v, "n")?);
        }
        if let Some(v) = self.m {
            cfg.m = Some(parse_m(&v)?);
        }
        if let Some(v) = self.delta {
            cfg.delta = Some(v);
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = Some(parse_epsilon(&v)?);
        }
        if let Some(v) = self.model {
            cfg.model = Some(parse_model(&v)?);
        }
        if let Some(v) = self.target {
            cfg.target = Some(parse_target(&v)?);
        }
        if let Some(v) = self.p_spec {
            cfg.p_spec = Some(parse_p_spec(&v)?);
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::Reconstruct(c) => (CommandKind::Reconstruct, c),
        Command::McGram(c) => (CommandKind::McGram, c),
        Command::McCrossterm(c) => (CommandKind::McCrossterm, c),
        Command::Convergence(c) => (CommandKind::Convergence, c),
        Command::Leverage(c) => (CommandKind::Leverage, c),
        Command::Bounds(c) => (CommandKind::Bounds, c),
    };
    let result = common.into_config().and_then(|cfg| sgs_cli::run(kind, cfg));
    match result {
        Ok((dir, outputs)) => {
            // A closed stdout (e.g. piped into `head`) must not fail a finished run.
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", outputs.headline);
            let _ = writeln!(out, "wrote {} file(s) to {}", outputs.files.len(), dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sgs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
