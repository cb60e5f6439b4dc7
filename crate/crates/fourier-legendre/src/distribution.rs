use crate::freq::frequency_at;
use crate::legendre::legendre_fourier_column;
use crate::{FlError, Result};

/// Default target for the distribution tail mass.
pub const DEFAULT_MAX_TAIL: f64 = 1e-4;

/// A truncated frequency band for the leverage distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlTruncation {
    /// Legendre degrees `0..n` in the reconstruction space.
    pub n: usize,
    /// Frequency positions retained, `σ(1..=J)`.
    pub j: usize,
    /// `1 − (1/n) Σ_retained ‖v_ℓ‖²`, the probability lost to truncation.
    pub tail_mass: f64,
}

/// Leverage scores `‖v_ℓ‖² = Σ_{k<n} (2k+1) j_k(πℓ)²` at the first `J`
/// frequency positions.
pub fn fl_leverage_scores(n: usize, j: usize) -> Vec<f64> {
    (0..j)
        .map(|pos| {
            legendre_fourier_column(frequency_at(pos), n)
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        })
        .collect()
}

/// Exact leverage distribution on the first `J` frequencies, renormalized
/// by the retained mass. Fails when more than half the mass is truncated.
pub fn fl_leverage_distribution(n: usize, j: usize) -> Result<(Vec<f64>, FlTruncation)> {
    if n == 0 || j == 0 {
        return Err(FlError::InvalidArgument(format!("need n ≥ 1 and J ≥ 1, got n={n}, J={j}")));
    }
    let scores = fl_leverage_scores(n, j);
    let retained: f64 = scores.iter().sum::<f64>() / n as f64;
    let tail_mass = 1.0 - retained;
    if tail_mass >= 0.5 {
        return Err(FlError::InsufficientTruncation { n, j, tail_mass });
    }
    let total = n as f64 * retained;
    let p = scores.iter().map(|s| s / total).collect();
    Ok((p, FlTruncation { n, j, tail_mass }))
}

/// Smallest odd `J = 2L + 1`, with `L` doubling from 16, whose tail mass is
/// below `max_tail`.
pub fn fl_truncation_for_tail(n: usize, max_tail: f64) -> Result<FlTruncation> {
    if !(max_tail > 0.0 && max_tail < 1.0) || n == 0 {
        return Err(FlError::InvalidArgument(format!(
            "need n ≥ 1 and a tail target in (0, 1), got n={n}, tail={max_tail}"
        )));
    }
    let mut half = 16usize;
    loop {
        let j = 2 * half + 1;
        let retained: f64 = fl_leverage_scores(n, j).iter().sum::<f64>() / n as f64;
        let tail_mass = 1.0 - retained;
        if tail_mass < max_tail {
            return Ok(FlTruncation { n, j, tail_mass });
        }
        if half > 1 << 24 {
            return Err(FlError::InsufficientTruncation { n, j, tail_mass });
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_degree_concentrates_at_zero() {
        let (p, t) = fl_leverage_distribution(1, 41).unwrap();
        assert_eq!(p[0], 1.0);
        assert!(p[1..].iter().all(|&x| x == 0.0));
        assert_eq!(t.tail_mass, 0.0);
    }

    #[test]
    fn zero_frequency_score() {
        let s = fl_leverage_scores(5, 401);
        assert_eq!(s[0], 1.0);
        let (_, t) = fl_leverage_distribution(5, 401).unwrap();
        assert!((s.iter().sum::<f64>() - 5.0 * (1.0 - t.tail_mass)).abs() < 1e-12);
    }

    #[test]
    fn too_narrow_band_is_rejected() {
        assert!(matches!(
            fl_leverage_distribution(20, 3),
            Err(FlError::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn tail_helper_meets_target() {
        let t = fl_truncation_for_tail(10, 1e-3).unwrap();
        assert!(t.tail_mass < 1e-3 && t.tail_mass >= 0.0);
        assert_eq!(t.j % 2, 1);
    }
}
