use sgs_bounds::{gram_sample_size, BoundInputs, GramMode};
use sgs_fourier_legendre::{
    build_fl_model_with_tolerance, target_coefficients, AnalyticTarget, TargetCoefficients,
    DEFAULT_MAX_DEFECT,
};
use sgs_linalg::{operator_norm, CMat, Complex64};
use sgs_sampling::{
    build_frame_model, leverage_profile, CoherenceProfile, FrameModel, LeverageProfile, PSpec,
};

use crate::config::{Counts, EpsName, EpsSpec, MRule, MSpec, ModelSpec, PSpecConfig, Plan, TargetSpec};
use crate::CliError;

/// Band information for Fourier–Legendre models.
#[derive(Debug, Clone, PartialEq)]
pub struct FlInfo {
    pub j: usize,
    pub ambient: usize,
    pub column_defects: Vec<f64>,
}

/// The element `f` to recover, in ambient coordinates.
#[derive(Debug, Clone)]
pub struct Target {
    pub label: String,
    pub f: Vec<Complex64>,
    /// Present for analytic targets on Fourier–Legendre models; gives the
    /// true `L²` error through Legendre coordinates.
    pub analytic: Option<(AnalyticTarget, TargetCoefficients)>,
}

impl Target {
    /// `‖f − f̃‖_{L²}` from Legendre coordinates, when available.
    pub fn legendre_error(&self, x_tilde: &[Complex64]) -> Option<f64> {
        self.analytic.as_ref().map(|(_, tc)| tc.legendre_error(x_tilde))
    }

    pub fn rho(&self) -> Option<f64> {
        self.analytic.as_ref().map(|(t, _)| t.rho())
    }
}

/// Model, target and derived settings shared by every command.
pub struct Setup {
    pub plan: Plan,
    pub model: FrameModel,
    pub fl: Option<FlInfo>,
    pub target: Option<Target>,
}

impl Setup {
    /// Builds the model and, when `need_target` is set, the target vector.
    /// Fourier–Legendre models without a configured target use `1/(x − 1.5)`.
    pub fn build(plan: Plan, need_target: bool) -> Result<Setup, CliError> {
        let n_max = *plan.n.iter().max().expect("plan has n");
        let (model, fl) = match &plan.model {
            ModelSpec::Identity { dim } => {
                if *dim == 0 {
                    return Err(CliError::Config("identity model needs dim ≥ 1".into()));
                }
                let i = CMat::identity(*dim);
                (build_frame_model(i.clone(), i, None)?, None)
            }
            ModelSpec::FourierLegendre { n, j, ambient, max_defect } => {
                let k = n.unwrap_or(n_max);
                let tol = max_defect.unwrap_or(DEFAULT_MAX_DEFECT);
                let flm = build_fl_model_with_tolerance(k, *j, *ambient, tol)?;
                let info = FlInfo { j: *j, ambient: *ambient, column_defects: flm.column_defects };
                (flm.model, Some(info))
            }
            ModelSpec::Custom { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read model {}: {e}", path.display()))
                })?;
                let model: FrameModel = serde_json::from_str(&text).map_err(|e| {
                    CliError::Config(format!("model file {}: {e}", path.display()))
                })?;
                (model, None)
            }
        };
        if n_max > model.num_recon() {
            return Err(CliError::Config(format!(
                "n = {n_max} exceeds the {} reconstruction vectors of the model",
                model.num_recon()
            )));
        }
        let target = if need_target { Some(build_target(&plan, &model, fl.as_ref(), n_max)?) } else { None };
        Ok(Setup { plan, model, fl, target })
    }

    pub fn target(&self) -> &Target {
        self.target.as_ref().expect("setup was built with a target")
    }

    pub fn p_spec(&self) -> PSpec {
        match &self.plan.p_spec {
            PSpecConfig::Leverage => PSpec::Leverage,
            PSpecConfig::Uniform => PSpec::UniformOnSupport,
            PSpecConfig::Custom(w) => PSpec::Custom(w.clone()),
        }
    }

    /// Sampling profile for `n`. On Fourier–Legendre models `tail_mass` is
    /// the leverage lost to the band, `1 − tr(Σ)/n`.
    pub fn profile(&self, n: usize) -> Result<LeverageProfile, CliError> {
        let mut prof = leverage_profile(&self.model, n, &self.p_spec())?;
        if self.fl.is_some() {
            prof.tail_mass = 1.0 - prof.trace_sigma / n as f64;
        }
        Ok(prof)
    }

    /// `ε` for this run: the configured value, or `λ₀` by default.
    pub fn epsilon(&self, prof: &LeverageProfile) -> f64 {
        match self.plan.epsilon {
            Some(EpsSpec::Value(e)) => e,
            Some(EpsSpec::Named(EpsName::Lambda0)) | None => prof.lambda0,
        }
    }

    /// Bound inputs from the model's scalars, overridden by configured
    /// scalars.
    pub fn bound_inputs(&self, prof: &LeverageProfile, coh: &CoherenceProfile) -> Result<BoundInputs, CliError> {
        let d = match self.model.declared_bounds() {
            Some(b) => b.d,
            None => operator_norm(self.model.w_coef())?.powi(2),
        };
        let s = &self.plan.scalars;
        Ok(BoundInputs {
            n: prof.n,
            delta: self.plan.delta,
            epsilon: Some(self.epsilon(prof)),
            r: s.r.or(Some(coh.r)),
            r_prime: s.r_prime.or(Some(coh.r_prime)),
            r_double: s.r_double.or(Some(coh.r_double)),
            k_scale: s.k_scale.or(Some(coh.k_scale)),
            sigma_norm: s.sigma_norm.or(Some(coh.sigma_norm)),
            sigma_inv_norm: s.sigma_inv_norm.or(Some(coh.sigma_inv_norm)),
            trace_sigma: s.trace_sigma.or(Some(prof.trace_sigma)),
            lambda0: s.lambda0.or(Some(prof.lambda0)),
            lambda: s.lambda.or(Some(coh.lambda)),
            d_riesz_upper: s.d_riesz_upper.or(Some(d)),
        })
    }

    /// Sample sizes for the `idx`-th value of `n`: every listed count for
    /// Monte Carlo sweeps, one count per `n` for convergence sweeps.
    pub fn sample_sizes(&self, idx: usize, inputs: &BoundInputs) -> Result<Vec<usize>, CliError> {
        let per_n = self.plan.n.len() > 1;
        match &self.plan.m {
            MSpec::Counts(Counts::One(m)) => Ok(vec![*m]),
            MSpec::Counts(Counts::Many(v)) if per_n => Ok(vec![v[idx]]),
            MSpec::Counts(Counts::Many(v)) => Ok(v.clone()),
            MSpec::Rule(rule) => {
                let mode = match rule {
                    MRule::RateOnb => GramMode::RateOnb,
                    MRule::RateRlogn => GramMode::RateRlogn,
                    MRule::RateLeverage => GramMode::RateLeverage,
                    MRule::AtLambda0 => GramMode::AtLambda0,
                    MRule::ExplicitEps => GramMode::ExplicitEps,
                };
                let m = gram_sample_size(inputs, mode)
                    .map_err(|e| CliError::Config(format!("sample-size rule {rule:?}: {e}")))?;
                if m == 0 {
                    return Err(CliError::Config(format!("sample-size rule {rule:?} gave m = 0")));
                }
                usize::try_from(m)
                    .map(|m| vec![m])
                    .map_err(|_| CliError::Config(format!("sample size {m} is too large")))
            }
        }
    }
}

fn build_target(plan: &Plan, model: &FrameModel, fl: Option<&FlInfo>, n_max: usize) -> Result<Target, CliError> {
    let ambient = model.ambient_dim();
    let analytic = |t: AnalyticTarget, label: String| -> Result<Target, CliError> {
        let fl = fl.ok_or_else(|| {
            CliError::Config("analytic targets need a fourier-legendre model".into())
        })?;
        let tc = target_coefficients(&t, n_max, fl.ambient)?;
        Ok(Target { label, f: tc.fourier.clone(), analytic: Some((t, tc)) })
    };
    match &plan.target {
        Some(TargetSpec::ExpC { c }) => analytic(AnalyticTarget::exp(*c)?, format!("exp_c({c})")),
        Some(TargetSpec::PoleA { a }) => analytic(AnalyticTarget::pole(*a)?, format!("pole_a({a})")),
        Some(TargetSpec::Coefficients { values }) => {
            if values.len() != ambient {
                return Err(CliError::Config(format!(
                    "target has {} coefficients, the model has ambient dimension {ambient}",
                    values.len()
                )));
            }
            if values.iter().flatten().any(|x| !x.is_finite()) {
                return Err(CliError::Config("target coefficients must be finite".into()));
            }
            let f = values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            Ok(Target { label: "coefficients".into(), f, analytic: None })
        }
        None if fl.is_some() => analytic(AnalyticTarget::pole(1.5)?, "pole_a(1.5)".into()),
        None => Ok(Target {
            label: "harmonic".into(),
            f: (0..ambient).map(|i| Complex64::new(1.0 / (i + 1) as f64, 0.0)).collect(),
            analytic: None,
        }),
    }
}
