use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::decomp::{hermitian_eigenvalues, norm_raw};
use crate::{CMat, LinalgError, Result};

/// Hermitian dilation of a `d₂ × d₁` matrix `t`: the `(d₁+d₂)`-square block
/// matrix `[[0, tᴴ], [t, 0]]`, i.e. `(x, y) ↦ (tᴴ y, t x)`.
pub fn hermitian_dilation(t: &CMat) -> CMat {
    let (d2, d1) = (t.rows(), t.cols());
    let mut h = DMatrix::zeros(d1 + d2, d1 + d2);
    h.view_mut((0, d1), (d1, d2)).copy_from(&t.as_dmatrix().adjoint());
    h.view_mut((d1, 0), (d2, d1)).copy_from(t.as_dmatrix());
    CMat::from_dmatrix(h).expect("dilation of a finite matrix is finite")
}

fn require_square(a: &CMat) -> Result<()> {
    if a.rows() != a.cols() || a.is_empty() {
        return Err(LinalgError::Shape(format!(
            "expected a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// `tr(a)/‖a‖` for a Hermitian positive semidefinite `a` (0 for the zero
/// matrix). PSD-ness is checked to `1e-10` relative to the largest entry.
pub fn effective_rank(a: &CMat) -> Result<f64> {
    require_square(a)?;
    let m = a.as_dmatrix();
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-10 * scale;
    let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > tol {
        return Err(LinalgError::NotPsd(asym));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian_eigenvalues(&herm);
    let lmin = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if lmin < -tol {
        return Err(LinalgError::NotPsd(-lmin));
    }
    let lmax = eig.iter().copied().fold(0.0, f64::max);
    if lmax == 0.0 {
        return Ok(0.0);
    }
    let trace: f64 = (0..m.nrows()).map(|i| m[(i, i)].re).sum();
    Ok(trace / lmax)
}

/// Orthogonal projector onto the column span, via the SVD with relative
/// threshold `rel_tol`.
pub fn projector_from_columns(cols: &CMat, rel_tol: f64) -> Result<CMat> {
    let q = crate::orthonormal_basis(cols, rel_tol)?;
    let qm = q.as_dmatrix();
    CMat::from_dmatrix(qm * qm.adjoint())
}

/// Largest violation of `P = Pᴴ` and `P² = P`, measured in operator norm.
pub fn is_projector(p: &CMat, tol: f64) -> bool {
    projector_violation(p).map(|v| v <= tol).unwrap_or(false)
}

fn projector_violation(p: &CMat) -> Result<f64> {
    require_square(p)?;
    let m = p.as_dmatrix();
    let herm = norm_raw(&(m - m.adjoint()));
    let idem = norm_raw(&(m * m - m));
    Ok(herm.max(idem))
}

/// `‖p − q‖` for two orthogonal projectors of equal dimension.
pub fn range_distance(p: &CMat, q: &CMat) -> Result<f64> {
    if p.rows() != q.rows() || p.cols() != q.cols() {
        return Err(LinalgError::Shape(format!(
            "projectors of different sizes: {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    for m in [p, q] {
        let v = projector_violation(m)?;
        if v > 1e-8 {
            return Err(LinalgError::NotProjector(v));
        }
    }
    Ok(norm_raw(&(p.as_dmatrix() - q.as_dmatrix())))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_norm;

    #[test]
    fn dilation_examples() {
        let h = hermitian_dilation(&CMat::from_real(1, 1, &[1.0]).unwrap());
        assert_eq!(h, CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        let z = hermitian_dilation(&CMat::zeros(2, 3));
        assert_eq!(z, CMat::zeros(5, 5));
        // Block placement: t is 2x1, so (x, y) ↦ (tᴴy, tx) with x scalar.
        let t = CMat::new(
            2,
            1,
            vec![Complex64::new(1.0, 2.0), Complex64::new(3.0, 0.0)],
        )
        .unwrap();
        let h = hermitian_dilation(&t);
        assert_eq!(h.get(0, 1), Complex64::new(1.0, -2.0));
        assert_eq!(h.get(1, 0), Complex64::new(1.0, 2.0));
        assert_eq!(h.get(2, 0), Complex64::new(3.0, 0.0));
        assert_eq!(h.get(1, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn effective_rank_examples() {
        assert!((effective_rank(&CMat::identity(5)).unwrap() - 5.0).abs() < 1e-14);
        assert!((effective_rank(&CMat::diag_real(&[1.0, 0.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((effective_rank(&CMat::diag_real(&[2.0, 1.0, 1.0])).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(effective_rank(&CMat::zeros(3, 3)).unwrap(), 0.0);
        assert!(matches!(
            effective_rank(&CMat::diag_real(&[1.0, -1.0])),
            Err(LinalgError::NotPsd(_))
        ));
        let skew = CMat::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(effective_rank(&skew).is_err());
    }

    #[test]
    fn projector_examples() {
        let e1 = CMat::from_real(3, 1, &[1.0, 0.0, 0.0]).unwrap();
        let p = projector_from_columns(&e1, 1e-12).unwrap();
        assert!(p.max_abs_diff(&CMat::diag_real(&[1.0, 0.0, 0.0])) < 1e-15);

        let full = CMat::from_real(2, 2, &[2.0, 1.0, 0.0, 3.0]).unwrap();
        assert!(projector_from_columns(&full, 1e-12).unwrap().max_abs_diff(&CMat::identity(2)) < 1e-14);

        let v = CMat::from_real(3, 1, &[1.0, -2.0, 0.5]).unwrap();
        let vv = CMat::from_real(3, 2, &[1.0, 1.0, -2.0, -2.0, 0.5, 0.5]).unwrap();
        let (p1, p2) = (
            projector_from_columns(&v, 1e-12).unwrap(),
            projector_from_columns(&vv, 1e-12).unwrap(),
        );
        assert!(p1.max_abs_diff(&p2) < 1e-14);
        assert!(is_projector(&p1, 1e-12));
    }

    #[test]
    fn range_distance_examples() {
        let p = CMat::diag_real(&[1.0, 0.0]);
        let q = CMat::diag_real(&[0.0, 1.0]);
        assert_eq!(range_distance(&p, &p).unwrap(), 0.0);
        assert!((range_distance(&p, &q).unwrap() - 1.0).abs() < 1e-14);
        let th = std::f64::consts::FRAC_PI_6;
        let (c, s) = (th.cos(), th.sin());
        let r = CMat::from_real(2, 2, &[c * c, c * s, c * s, s * s]).unwrap();
        assert!((range_distance(&p, &r).unwrap() - 0.5).abs() < 1e-14);
        let not_p = CMat::diag_real(&[2.0, 0.0]);
        assert!(matches!(
            range_distance(&p, &not_p),
            Err(LinalgError::NotProjector(_))
        ));
        assert!(range_distance(&p, &CMat::identity(3)).is_err());
        assert!((operator_norm(&r).unwrap() - 1.0).abs() < 1e-14);
    }
}
