use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Reconstruct,
    McGram,
    McCrossterm,
    Convergence,
    Leverage,
    Bounds,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Reconstruct => "reconstruct",
            CommandKind::McGram => "mc-gram",
            CommandKind::McCrossterm => "mc-crossterm",
            CommandKind::Convergence => "convergence",
            CommandKind::Leverage => "leverage",
            CommandKind::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `S = W = I_dim`.
    Identity { dim: usize },
    /// Fourier sampling of normalized Legendre polynomials. `n` columns
    /// (default: the largest requested `n`), `J` sampled frequencies and an
    /// ambient band of `ambient` frequencies.
    #[serde(alias = "fl")]
    FourierLegendre {
        #[serde(default)]
        n: Option<usize>,
        #[serde(rename = "J")]
        j: usize,
        ambient: usize,
        #[serde(default)]
        max_defect: Option<f64>,
    },
    /// A serialized frame model (`s_coef`, `w_coef`, optional bounds).
    Custom { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    ExpC { c: f64 },
    PoleA { a: f64 },
    /// Explicit ambient coordinates `[re, im]` of `f`.
    Coefficients { values: Vec<[f64; 2]> },
}

/// One count or a sweep list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Counts {
    One(usize),
    Many(Vec<usize>),
}

impl Counts {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            Counts::One(x) => vec![*x],
            Counts::Many(v) => v.clone(),
        }
    }
}

/// Sample-size rule evaluated from the model's scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MRule {
    RateOnb,
    RateRlogn,
    RateLeverage,
    AtLambda0,
    ExplicitEps,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MSpec {
    Counts(Counts),
    Rule(MRule),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsName {
    Lambda0,
}

/// A threshold `ε`, either explicit or the smallest eigenvalue `λ₀` of `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EpsSpec {
    Value(f64),
    Named(EpsName),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PSpecConfig {
    Leverage,
    Uniform,
    Custom(Vec<f64>),
}

/// Scalars that override (or replace) the model-derived bound inputs.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scalars {
    pub r: Option<f64>,
    pub r_prime: Option<f64>,
    pub r_double: Option<f64>,
    pub k_scale: Option<f64>,
    pub sigma_norm: Option<f64>,
    pub sigma_inv_norm: Option<f64>,
    pub trace_sigma: Option<f64>,
    pub lambda0: Option<f64>,
    pub lambda: Option<f64>,
    pub d_riesz_upper: Option<f64>,
}

/// Contents of a `--config` file. Every field is optional here; defaults and
/// per-command requirements are applied by [`Plan::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<CommandKind>,
    pub model: Option<ModelSpec>,
    pub target: Option<TargetSpec>,
    pub n: Option<Counts>,
    pub m: Option<MSpec>,
    pub delta: Option<f64>,
    pub epsilon: Option<EpsSpec>,
    pub trials: Option<usize>,
    pub base_seed: Option<u64>,
    pub p_spec: Option<PSpecConfig>,
    pub out_path: Option<PathBuf>,
    pub scalars: Option<Scalars>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| bad(format!("{what}: cannot parse {s:?}")))
}

/// `"10"` or `"4,8,12"`.
pub fn parse_counts(s: &str, what: &str) -> Result<Counts, CliError> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| parse_num(p, what))
        .collect::<Result<_, _>>()?;
    Ok(if parts.len() == 1 { Counts::One(parts[0]) } else { Counts::Many(parts) })
}

/// A count list or a rule name such as `rate_onb`.
pub fn parse_m(s: &str) -> Result<MSpec, CliError> {
    let rule = match s.trim() {
        "rate_onb" => Some(MRule::RateOnb),
        "rate_rlogn" => Some(MRule::RateRlogn),
        "rate_leverage" => Some(MRule::RateLeverage),
        "at_lambda0" => Some(MRule::AtLambda0),
        "explicit_eps" => Some(MRule::ExplicitEps),
        _ => None,
    };
    match rule {
        Some(r) => Ok(MSpec::Rule(r)),
        None => Ok(MSpec::Counts(parse_counts(s, "--m")?)),
    }
}

pub fn parse_epsilon(s: &str) -> Result<EpsSpec, CliError> {
    if s.trim() == "lambda0" {
        return Ok(EpsSpec::Named(EpsName::Lambda0));
    }
    Ok(EpsSpec::Value(parse_num(s, "--epsilon")?))
}

/// `identity:DIM`, `fourier-legendre:N:J:AMBIENT` (alias `fl`) or
/// `custom:PATH`.
pub fn parse_model(s: &str) -> Result<ModelSpec, CliError> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad(format!("--model: expected KIND:ARGS, got {s:?}")))?;
    match kind {
        "identity" => Ok(ModelSpec::Identity { dim: parse_num(rest, "--model identity")? }),
        "fourier-legendre" | "fl" => {
            let v: Vec<usize> = rest
                .split(':')
                .map(|p| parse_num(p, "--model fourier-legendre"))
                .collect::<Result<_, _>>()?;
            match v[..] {
                [n, j, ambient] => Ok(ModelSpec::FourierLegendre { n: Some(n), j, ambient, max_defect: None }),
                [j, ambient] => Ok(ModelSpec::FourierLegendre { n: None, j, ambient, max_defect: None }),
                _ => Err(bad("--model fourier-legendre takes N:J:AMBIENT or J:AMBIENT")),
            }
        }
        "custom" => Ok(ModelSpec::Custom { path: PathBuf::from(rest) }),
        other => Err(bad(format!("--model: unknown kind {other:?}"))),
    }
}

/// `exp_c:C` or `pole_a:A`.
pub fn parse_target(s: &str) -> Result<TargetSpec, CliError> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad(format!("--target: expected KIND:VALUE, got {s:?}")))?;
    match kind {
        "exp_c" | "exp" => Ok(TargetSpec::ExpC { c: parse_num(rest, "--target exp_c")? }),
        "pole_a" | "pole" => Ok(TargetSpec::PoleA { a: parse_num(rest, "--target pole_a")? }),
        other => Err(bad(format!("--target: unknown kind {other:?}"))),
    }
}

/// `leverage`, `uniform` or comma-separated custom weights.
pub fn parse_p_spec(s: &str) -> Result<PSpecConfig, CliError> {
    match s.trim() {
        "leverage" => Ok(PSpecConfig::Leverage),
        "uniform" => Ok(PSpecConfig::Uniform),
        list => Ok(PSpecConfig::Custom(
            list.split(',').map(|p| parse_num(p, "--p-spec")).collect::<Result<_, _>>()?,
        )),
    }
}

/// A validated configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub command: CommandKind,
    pub model: ModelSpec,
    pub target: Option<TargetSpec>,
    pub n: Vec<usize>,
    pub m: MSpec,
    pub delta: f64,
    pub epsilon: Option<EpsSpec>,
    pub trials: usize,
    pub base_seed: u64,
    pub p_spec: PSpecConfig,
    pub out_path: Option<PathBuf>,
    pub scalars: Scalars,
}

/// Monte Carlo summaries need at least this many trials.
pub const MIN_MC_TRIALS: usize = 30;

fn strictly_increasing(v: &[usize], what: &str) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(bad(format!("{what} must not be empty")));
    }
    if v.contains(&0) {
        return Err(bad(format!("{what} entries must be at least 1")));
    }
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad(format!("{what} must be strictly increasing, got {v:?}")));
    }
    Ok(())
}

impl Plan {
    /// Applies defaults and validates `cfg` for `command`.
    pub fn resolve(command: CommandKind, cfg: ExperimentConfig) -> Result<Plan, CliError> {
        if let Some(c) = cfg.command {
            if c != command {
                return Err(bad(format!(
                    "config is for {:?} but the {:?} command was run",
                    c.name(),
                    command.name()
                )));
            }
        }
        let model = cfg.model.ok_or_else(|| bad("no model given (config `model` or --model)"))?;
        let n = match (&cfg.n, &model) {
            (Some(c), _) => c.to_vec(),
            (None, ModelSpec::Identity { dim }) => vec![*dim],
            (None, ModelSpec::FourierLegendre { n: Some(k), .. }) => vec![*k],
            (None, _) => return Err(bad("no n given (config `n` or --n)")),
        };
        strictly_increasing(&n, "n")?;
        let m = cfg.m.unwrap_or(MSpec::Rule(MRule::RateOnb));
        if let MSpec::Counts(c) = &m {
            strictly_increasing(&c.to_vec(), "m")?;
        }
        let delta = cfg.delta.unwrap_or(0.1);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(bad(format!("delta must lie in (0, 1), got {delta}")));
        }
        if let Some(EpsSpec::Value(e)) = cfg.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(bad(format!("epsilon must be positive, got {e}")));
            }
        }
        let default_trials = match command {
            CommandKind::McGram | CommandKind::McCrossterm => 100,
            CommandKind::Convergence => 20,
            _ => 1,
        };
        let trials = cfg.trials.unwrap_or(default_trials);
        if trials == 0 {
            return Err(bad("trials must be at least 1"));
        }
        let single_n = matches!(
            command,
            CommandKind::Reconstruct | CommandKind::McGram | CommandKind::McCrossterm | CommandKind::Leverage | CommandKind::Bounds
        );
        if single_n && n.len() != 1 {
            return Err(bad(format!("{} takes a single n, got {n:?}", command.name())));
        }
        match command {
            CommandKind::McGram | CommandKind::McCrossterm if trials < MIN_MC_TRIALS => {
                return Err(bad(format!("Monte Carlo summaries need at least {MIN_MC_TRIALS} trials, got {trials}")));
            }
            CommandKind::Convergence if n.len() < 4 => {
                return Err(bad(format!("convergence needs at least 4 values of n, got {}", n.len())));
            }
            CommandKind::Reconstruct => {
                if let MSpec::Counts(Counts::Many(v)) = &m {
                    if v.len() != 1 {
                        return Err(bad("reconstruct takes a single m"));
                    }
                }
            }
            _ => {}
        }
        if command == CommandKind::Convergence {
            if let MSpec::Counts(Counts::Many(v)) = &m {
                if v.len() != n.len() {
                    return Err(bad("an m list for convergence must match the n sweep in length"));
                }
            }
        }
        let fl = matches!(model, ModelSpec::FourierLegendre { .. });
        let needs_target = matches!(command, CommandKind::Reconstruct | CommandKind::Convergence);
        if fl && needs_target && cfg.target.is_none() {
            return Err(bad(format!("{} on a Fourier–Legendre model needs a target", command.name())));
        }
        Ok(Plan {
            command,
            model,
            target: cfg.target,
            n,
            m,
            delta,
            epsilon: cfg.epsilon,
            trials,
            base_seed: cfg.base_seed.unwrap_or(0),
            p_spec: cfg.p_spec.unwrap_or(PSpecConfig::Leverage),
            out_path: cfg.out_path,
            scalars: cfg.scalars.unwrap_or_default(),
        })
    }
}
