use serde::{Deserialize, Serialize};

use crate::{BoundsError, Result};

/// Scalars feeding the sample-size thresholds. Optional fields are only
/// required by the thresholds that use them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundInputs {
    pub n: usize,
    pub delta: f64,
    pub epsilon: Option<f64>,
    pub r: Option<f64>,
    pub r_prime: Option<f64>,
    pub r_double: Option<f64>,
    pub k_scale: Option<f64>,
    pub sigma_norm: Option<f64>,
    /// `‖Σ⁻¹‖`, or `‖Σ†‖` in the frame case.
    pub sigma_inv_norm: Option<f64>,
    pub trace_sigma: Option<f64>,
    /// Smallest nonzero eigenvalue of `Σ`.
    pub lambda0: Option<f64>,
    /// `Λ = 1 + ‖Σ⁻¹‖ + ‖C‖`.
    pub lambda: Option<f64>,
    /// Upper Riesz/frame bound `D` of the reconstruction system.
    pub d_riesz_upper: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramMode {
    /// `M_{ε,δ} = (8/3) R ‖Σ‖ ln(2n/δ) / ε²`, with `ε ∈ (0, ‖Σ‖]`.
    ExplicitEps,
    /// `M_δ`: the same threshold at `ε = λ₀`, guaranteeing invertibility.
    AtLambda0,
    /// `(8/3) R ‖Σ‖ ‖Σ⁻¹‖² ln(2n/δ)`, the explicit form of `m ≳ R log(2n/δ)`.
    RateRlogn,
    /// `(8/3) tr(Σ) ‖Σ‖ ‖Σ⁻¹‖² ln(2n/δ)` for leverage-score sampling.
    RateLeverage,
    /// `(8/3) n ln(2n/δ)` for orthonormal systems with leverage sampling.
    RateOnb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KVariant {
    Riesz,
    Frames,
}

fn need(x: Option<f64>, name: &'static str) -> Result<f64> {
    let v = x.ok_or(BoundsError::Missing(name))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(BoundsError::Invalid(format!("{name} = {v} must be finite and >= 0")));
    }
    Ok(v)
}

fn need_eps(x: Option<f64>) -> Result<f64> {
    let e = need(x, "epsilon")?;
    if e <= 0.0 {
        return Err(BoundsError::Invalid(format!("epsilon = {e} must be positive")));
    }
    Ok(e)
}

fn check_common(inp: &BoundInputs) -> Result<()> {
    if inp.n == 0 {
        return Err(BoundsError::Invalid("n must be at least 1".into()));
    }
    if !(inp.delta > 0.0 && inp.delta < 1.0) {
        return Err(BoundsError::Invalid(format!("delta = {} must lie in (0, 1)", inp.delta)));
    }
    Ok(())
}

fn to_count(x: f64) -> Result<u64> {
    if !x.is_finite() || x > u64::MAX as f64 {
        return Err(BoundsError::Invalid(format!("threshold {x} is not representable")));
    }
    Ok(x.ceil().max(0.0) as u64)
}

fn gram_formula(r: f64, sigma_norm: f64, eps: f64, n: usize, delta: f64) -> f64 {
    8.0 / 3.0 * r * sigma_norm * (2.0 * n as f64 / delta).ln() / (eps * eps)
}

/// Sample size guaranteeing Gram concentration (or invertibility, or one of
/// the headline rates) with probability at least `1 − δ`.
pub fn gram_sample_size(inp: &BoundInputs, mode: GramMode) -> Result<u64> {
    check_common(inp)?;
    let n = inp.n;
    let log_term = (2.0 * n as f64 / inp.delta).ln();
    let value = match mode {
        GramMode::ExplicitEps | GramMode::AtLambda0 => {
            let r = need(inp.r, "R")?;
            let s = need(inp.sigma_norm, "sigma_norm")?;
            let eps = if mode == GramMode::ExplicitEps {
                need_eps(inp.epsilon)?
            } else {
                let l0 = need(inp.lambda0, "lambda0")?;
                if l0 <= 0.0 {
                    return Err(BoundsError::Invalid("lambda0 must be positive".into()));
                }
                l0
            };
            if eps > s {
                return Err(BoundsError::EpsilonRange {
                    eps,
                    range: format!("(0, {s}] (upper end is ‖Σ‖)"),
                });
            }
            gram_formula(r, s, eps, n, inp.delta)
        }
        GramMode::RateRlogn => {
            let r = need(inp.r, "R")?;
            let s = need(inp.sigma_norm, "sigma_norm")?;
            let si = need(inp.sigma_inv_norm, "sigma_inv_norm")?;
            8.0 / 3.0 * r * s * si * si * log_term
        }
        GramMode::RateLeverage => {
            let t = need(inp.trace_sigma, "trace_sigma")?;
            let s = need(inp.sigma_norm, "sigma_norm")?;
            let si = need(inp.sigma_inv_norm, "sigma_inv_norm")?;
            8.0 / 3.0 * t * s * si * si * log_term
        }
        GramMode::RateOnb => 8.0 / 3.0 * n as f64 * log_term,
    };
    to_count(value)
}

fn crossterm_formula(k: f64, r2: f64, n: usize, delta: f64, eps: f64) -> f64 {
    10.0 / 3.0 * k * r2 * (28.0 * n as f64 / delta).ln() / (eps * eps)
}

/// `M̃_{ε,δ} = (10/3) K R″ ln(28n/δ) / ε²`, with `ε ∈ (0, ‖Σ‖]`.
pub fn crossterm_sample_size(inp: &BoundInputs) -> Result<u64> {
    check_common(inp)?;
    let k = need(inp.k_scale, "K")?;
    let r2 = need(inp.r_double, "R_double")?;
    let s = need(inp.sigma_norm, "sigma_norm")?;
    let eps = need_eps(inp.epsilon)?;
    if eps > s {
        return Err(BoundsError::EpsilonRange {
            eps,
            range: format!("(0, {s}] (upper end is ‖Σ‖)"),
        });
    }
    to_count(crossterm_formula(k, r2, inp.n, inp.delta, eps))
}

/// Sample size after which the empirical cross factor `K_{n,Ω}` is within
/// `ε` of its limit with probability at least `1 − δ`.
pub fn kfactor_sample_size(inp: &BoundInputs, variant: KVariant) -> Result<u64> {
    check_common(inp)?;
    let k = need(inp.k_scale, "K")?;
    let r2 = need(inp.r_double, "R_double")?;
    let lam = need(inp.lambda, "Lambda")?;
    let d = need(inp.d_riesz_upper, "D")?;
    let si = need(inp.sigma_inv_norm, "sigma_inv_norm")?;
    let eps = need_eps(inp.epsilon)?;
    let upper = lam * d.sqrt() * (2.0 * si).min(1.0);
    if eps >= upper {
        return Err(BoundsError::EpsilonRange {
            eps,
            range: format!("(0, {upper}) (Λ√D·min{{1, 2‖Σ⁻¹‖}})"),
        });
    }
    let value = match variant {
        KVariant::Riesz => {
            10.0 / 3.0 * k * r2 * (56.0 * inp.n as f64 / inp.delta).ln() * lam * lam * d
                / (eps * eps)
                * (2.0 * si).max(1.0).powi(4)
        }
        KVariant::Frames => {
            let scale = lam * d.sqrt();
            let e1 = eps / scale;
            let e2 = eps / (4.0 * si * si * scale);
            let half = inp.delta / 2.0;
            crossterm_formula(k, r2, inp.n, half, e1)
                .ceil()
                .max(crossterm_formula(k, r2, inp.n, half, e2).ceil())
        }
    };
    to_count(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> BoundInputs {
        BoundInputs {
            n: 10,
            delta: 0.1,
            ..Default::default()
        }
    }

    #[test]
    fn rate_onb_example() {
        assert_eq!(gram_sample_size(&base(), GramMode::RateOnb).unwrap(), 142);
    }

    #[test]
    fn at_lambda0_collapses_to_onb_rate_for_identity_gram() {
        let inp = BoundInputs {
            r: Some(10.0),
            sigma_norm: Some(1.0),
            lambda0: Some(1.0),
            sigma_inv_norm: Some(1.0),
            ..base()
        };
        let onb = gram_sample_size(&inp, GramMode::RateOnb).unwrap();
        assert_eq!(gram_sample_size(&inp, GramMode::AtLambda0).unwrap(), onb);
        assert_eq!(gram_sample_size(&inp, GramMode::RateRlogn).unwrap(), onb);
        let lev = BoundInputs {
            trace_sigma: Some(10.0),
            ..inp
        };
        assert_eq!(gram_sample_size(&lev, GramMode::RateLeverage).unwrap(), onb);
    }

    #[test]
    fn explicit_eps_scaling_and_range() {
        let inp = BoundInputs {
            r: Some(7.0),
            sigma_norm: Some(2.0),
            epsilon: Some(1.0),
            ..base()
        };
        let full = gram_sample_size(&inp, GramMode::ExplicitEps).unwrap();
        let half = gram_sample_size(
            &BoundInputs {
                epsilon: Some(0.5),
                ..inp.clone()
            },
            GramMode::ExplicitEps,
        )
        .unwrap();
        assert!(half >= 4 * full - 4 && half <= 4 * full);
        let bad = BoundInputs {
            epsilon: Some(2.5),
            ..inp.clone()
        };
        assert!(matches!(
            gram_sample_size(&bad, GramMode::ExplicitEps),
            Err(BoundsError::EpsilonRange { .. })
        ));
        let missing = BoundInputs { r: None, ..inp };
        assert_eq!(
            gram_sample_size(&missing, GramMode::ExplicitEps),
            Err(BoundsError::Missing("R"))
        );
    }

    fn cross() -> BoundInputs {
        BoundInputs {
            k_scale: Some(1.0),
            r_double: Some(10.0),
            sigma_norm: Some(1.0),
            epsilon: Some(0.5),
            ..base()
        }
    }

    #[test]
    fn crossterm_example() {
        assert_eq!(crossterm_sample_size(&cross()).unwrap(), 1059);
        let boundary = BoundInputs {
            epsilon: Some(1.0),
            ..cross()
        };
        assert!(crossterm_sample_size(&boundary).is_ok());
        let doubled = BoundInputs {
            r_double: Some(20.0),
            ..cross()
        };
        let (a, b) = (
            crossterm_sample_size(&cross()).unwrap(),
            crossterm_sample_size(&doubled).unwrap(),
        );
        assert!(b >= 2 * a - 1 && b <= 2 * a);
    }

    fn kf() -> BoundInputs {
        BoundInputs {
            lambda: Some(2.0),
            d_riesz_upper: Some(1.0),
            sigma_inv_norm: Some(1.0),
            ..cross()
        }
    }

    #[test]
    fn kfactor_riesz_matches_formula() {
        // (10/3)·1·10·ln(5600)·4·1/0.25·max{1,2}⁴ = 73647.12…
        let direct: f64 = 10.0 / 3.0 * 10.0 * 5600f64.ln() * 4.0 / 0.25 * 16.0;
        assert!((direct - 73_647.12).abs() < 0.01);
        assert_eq!(kfactor_sample_size(&kf(), KVariant::Riesz).unwrap(), 73_648);
    }

    #[test]
    fn kfactor_frames_is_max_of_crossterm_sizes() {
        let inp = BoundInputs {
            sigma_norm: Some(4.0),
            sigma_inv_norm: Some(0.4),
            epsilon: Some(0.3),
            ..kf()
        };
        let scale = 2.0;
        let at = |eps: f64| {
            crossterm_sample_size(&BoundInputs {
                epsilon: Some(eps),
                delta: inp.delta / 2.0,
                ..inp.clone()
            })
            .unwrap()
        };
        let expect = at(0.3 / scale).max(at(0.3 / (4.0 * 0.16 * scale)));
        assert_eq!(kfactor_sample_size(&inp, KVariant::Frames).unwrap(), expect);
    }

    #[test]
    fn kfactor_rejects_boundary_epsilon() {
        // Λ√D·min{1, 2‖Σ⁻¹‖} = 2.
        let at_edge = BoundInputs {
            epsilon: Some(2.0),
            ..kf()
        };
        for v in [KVariant::Riesz, KVariant::Frames] {
            assert!(matches!(
                kfactor_sample_size(&at_edge, v),
                Err(BoundsError::EpsilonRange { .. })
            ));
        }
    }
}
