use nalgebra::DMatrix;
use sgs_linalg::{CMat, Complex64};
use sgs_sampling::{build_frame_model, leverage_profile, FrameModel, LeverageProfile, PSpec};

use crate::freq::frequency_at;
use crate::legendre::legendre_fourier_column;
use crate::{FlError, Result};

/// Default bound on the per-column truncation defect `1 − ‖column‖²`.
///
/// Legendre columns lose roughly `2(2k+1)/(π²L)` of their energy outside
/// `|ℓ| ≤ L`, so tighter bounds need ambient dimensions that grow linearly
/// in `1/defect`.
pub const DEFAULT_MAX_DEFECT: f64 = 1e-2;

/// A Fourier-sampling / Legendre-reconstruction model and its truncation
/// audit.
#[derive(Debug, Clone)]
pub struct FlModel {
    pub model: FrameModel,
    pub n: usize,
    pub j: usize,
    pub ambient: usize,
    /// `1 − ‖w_k‖²` after truncation to the ambient band, per column.
    pub column_defects: Vec<f64>,
}

impl FlModel {
    pub fn max_defect(&self) -> f64 {
        self.column_defects.iter().copied().fold(0.0, f64::max)
    }

    /// Leverage profile for the first `n` columns. `tail_mass` is the
    /// leverage lost to the band, `1 − tr(Σ)/n`.
    pub fn leverage_profile(&self, n: usize) -> Result<LeverageProfile> {
        let mut prof = leverage_profile(&self.model, n, &PSpec::Leverage)?;
        prof.tail_mass = 1.0 - prof.trace_sigma / n as f64;
        Ok(prof)
    }
}

/// [`build_fl_model_with_tolerance`] at [`DEFAULT_MAX_DEFECT`].
pub fn build_fl_model(n: usize, j: usize, ambient: usize) -> Result<FlModel> {
    build_fl_model_with_tolerance(n, j, ambient, DEFAULT_MAX_DEFECT)
}

/// Ambient coordinates are the Fourier functions `(1/√2)e^{iπσ(r)x}` for the
/// first `ambient` positions. Sampling vectors are the first `J` of them;
/// reconstruction column `k` holds the coefficients of the normalized
/// Legendre polynomial of degree `k`.
pub fn build_fl_model_with_tolerance(
    n: usize,
    j: usize,
    ambient: usize,
    max_defect: f64,
) -> Result<FlModel> {
    if n == 0 || j == 0 || ambient < j {
        return Err(FlError::InvalidArgument(format!(
            "need n ≥ 1, J ≥ 1 and ambient ≥ J, got n={n}, J={j}, ambient={ambient}"
        )));
    }
    let mut w = DMatrix::<Complex64>::zeros(ambient, n);
    for r in 0..ambient {
        for (k, z) in legendre_fourier_column(frequency_at(r), n).into_iter().enumerate() {
            w[(r, k)] = z;
        }
    }
    let column_defects: Vec<f64> = (0..n).map(|k| 1.0 - w.column(k).norm_squared()).collect();
    let worst = column_defects.iter().copied().fold(0.0, f64::max);
    if worst > max_defect {
        return Err(FlError::AmbientTooSmall { ambient, defect: worst, tolerance: max_defect });
    }
    let s = DMatrix::<Complex64>::identity(ambient, j);
    let model = build_frame_model(CMat::from_dmatrix(s)?, CMat::from_dmatrix(w)?, None)?;
    Ok(FlModel { model, n, j, ambient, column_defects })
}

/// `‖f − g‖` in ambient Fourier coordinates (Parseval).
pub fn l2_error(f: &[Complex64], g: &[Complex64]) -> Result<f64> {
    if f.len() != g.len() {
        return Err(FlError::InvalidArgument(format!(
            "coefficient vectors differ in length: {} vs {}",
            f.len(),
            g.len()
        )));
    }
    Ok(f.iter().zip(g).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_is_a_unit_vector() {
        let m = build_fl_model(1, 5, 9).unwrap();
        let w = m.model.w_coef();
        assert_eq!(w.get(0, 0), Complex64::new(1.0, 0.0));
        for r in 1..9 {
            assert_eq!(w.get(r, 0).norm(), 0.0);
        }
        assert_eq!(m.column_defects, vec![0.0]);
        assert!(m.model.flags().sampling_is_orthonormal);
    }

    #[test]
    fn defect_policy() {
        let err = build_fl_model_with_tolerance(5, 201, 201, 1e-6).unwrap_err();
        assert!(matches!(err, FlError::AmbientTooSmall { .. }));
        let m = build_fl_model(5, 201, 2001).unwrap();
        assert!(m.max_defect() < 2e-3);
        assert!(m.column_defects.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn l2_error_examples() {
        let f = vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)];
        assert_eq!(l2_error(&f, &f).unwrap(), 0.0);
        let mut g = f.clone();
        g[0] -= 1.0;
        assert_eq!(l2_error(&f, &g).unwrap(), 1.0);
        assert!(l2_error(&f, &g[..1]).is_err());
    }
}
