use crate::{BoundsError, Result};

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(BoundsError::Invalid(format!("{name} = {x} must be finite and >= 0")));
    }
    Ok(())
}

/// `exp(−(ε²/2)/(v + Lε/3))`, taking the limit 0 when the denominator
/// vanishes and `ε > 0`.
fn bernstein_exp(eps: f64, l: f64, v: f64) -> f64 {
    if eps == 0.0 {
        return 1.0;
    }
    let den = v + l * eps / 3.0;
    if den == 0.0 {
        return 0.0;
    }
    (-(eps * eps / 2.0) / den).exp()
}

/// Matrix Bernstein bound `2d · exp(−(ε²/2)/(V + Lε/3))` for sums of
/// independent, centered, self-adjoint `d × d` random matrices with
/// `‖X_t‖ ≤ L` and `‖Σ E[X_t²]‖ ≤ V`.
pub fn bernstein_matrix_tail(eps: f64, d: usize, l: f64, v: f64) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    for (name, x) in [("eps", eps), ("L", l), ("V", v)] {
        assert!(x >= 0.0 && x.is_finite(), "{name} = {x} must be finite and >= 0");
    }
    2.0 * d as f64 * bernstein_exp(eps, l, v)
}

/// Smallest admissible deviation `(L + √(L² + 36σ²))/6` for the
/// effective-rank Bernstein bounds.
pub fn operator_validity_threshold(l: f64, sigma2: f64) -> f64 {
    (l + (l * l + 36.0 * sigma2).sqrt()) / 6.0
}

/// Effective-rank Bernstein bound `14 r · exp(−(ε²/2)/(σ² + Lε/3))` for
/// self-adjoint operators; only valid once `ε` reaches the threshold.
pub fn bernstein_operator_tail(eps: f64, l: f64, sigma2: f64, eff_rank: f64) -> Result<f64> {
    for (name, x) in [("eps", eps), ("L", l), ("sigma2", sigma2), ("eff_rank", eff_rank)] {
        check_nonneg(name, x)?;
    }
    let threshold = operator_validity_threshold(l, sigma2);
    if eps < threshold {
        return Err(BoundsError::BelowValidity { eps, threshold });
    }
    Ok(14.0 * eff_rank * bernstein_exp(eps, l, sigma2))
}

/// Bernstein bound for rectangular random operators,
/// `14 (tr V₁ + tr V₂)/max{‖V₁‖, ‖V₂‖} · exp(−(ε²/2)/(σ² + Lε/3))`.
pub fn bernstein_rectangular_tail(
    eps: f64,
    l: f64,
    sigma2: f64,
    tr_v1: f64,
    tr_v2: f64,
    max_v_norm: f64,
) -> Result<f64> {
    for (name, x) in [
        ("eps", eps),
        ("L", l),
        ("sigma2", sigma2),
        ("tr_v1", tr_v1),
        ("tr_v2", tr_v2),
        ("max_v_norm", max_v_norm),
    ] {
        check_nonneg(name, x)?;
    }
    if max_v_norm == 0.0 {
        return Err(BoundsError::DegenerateVariance);
    }
    let threshold = operator_validity_threshold(l, sigma2);
    if eps < threshold {
        return Err(BoundsError::BelowValidity { eps, threshold });
    }
    Ok(14.0 * (tr_v1 + tr_v2) / max_v_norm * bernstein_exp(eps, l, sigma2))
}
