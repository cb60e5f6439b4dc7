use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{CMat, CVec, LinalgError, Result};

/// Thin singular value decomposition `a = u · diag(s) · vh`, with `s` sorted
/// in nonincreasing order.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: CMat,
    pub s: Vec<f64>,
    pub vh: CMat,
}

impl SvdFactors {
    /// Number of singular values strictly above `rel_tol * s_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        retained(&self.s, rel_tol)
    }
}

/// Count of leading (sorted) singular values above `rel_tol · s[0]`.
pub(crate) fn retained(s: &[f64], rel_tol: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().take_while(|&&x| x > rel_tol * smax).count()
}

/// The module-wide default rank threshold `1e-10 · max(rows, cols)`.
pub fn default_rel_tol(rows: usize, cols: usize) -> f64 {
    1e-10 * rows.max(cols).max(1) as f64
}

fn require_nonempty(a: &CMat) -> Result<()> {
    if a.is_empty() {
        return Err(LinalgError::Empty {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(())
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(LinalgError::Tolerance(rel_tol));
    }
    Ok(())
}

fn to_faer(a: &DMatrix<Complex64>) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Sorted thin SVD on a raw nalgebra matrix. Callers guarantee finiteness.
pub(crate) fn svd_raw(
    a: &DMatrix<Complex64>,
) -> (DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>) {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return (
            DMatrix::zeros(a.nrows(), 0),
            Vec::new(),
            DMatrix::zeros(0, a.ncols()),
        );
    }
    let dec = to_faer(a)
        .thin_svd()
        .expect("SVD iteration failed on a finite matrix");
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s[j].re.total_cmp(&s[i].re));
    let us = DMatrix::from_fn(a.nrows(), k, |i, c| u[(i, order[c])]);
    let vs = DMatrix::from_fn(k, a.ncols(), |r, j| v[(j, order[r])].conj());
    let ss = order.iter().map(|&c| s[c].re.max(0.0)).collect();
    (us, ss, vs)
}

/// Eigenvalues of a Hermitian matrix (lower triangle is read), ascending.
pub(crate) fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev = to_faer(a)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("eigenvalue iteration failed on a finite matrix");
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn svd(a: &CMat) -> SvdFactors {
    let (u, s, vh) = svd_raw(a.as_dmatrix());
    SvdFactors {
        u: CMat::from_dmatrix(u).expect("SVD of a finite matrix is finite"),
        s,
        vh: CMat::from_dmatrix(vh).expect("SVD of a finite matrix is finite"),
    }
}

/// Largest singular value.
pub fn operator_norm(a: &CMat) -> Result<f64> {
    require_nonempty(a)?;
    Ok(norm_raw(a.as_dmatrix()))
}

pub(crate) fn norm_raw(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    to_faer(a)
        .singular_values()
        .expect("SVD iteration failed on a finite matrix")
        .into_iter()
        .fold(0.0, f64::max)
}

/// Moore–Penrose pseudo-inverse; singular values `≤ rel_tol · σ_max` are
/// treated as zero. The zero matrix maps to the zero matrix of transposed
/// shape.
pub fn pseudo_inverse(a: &CMat, rel_tol: f64) -> Result<CMat> {
    require_nonempty(a)?;
    check_tol(rel_tol)?;
    let (u, s, vh) = svd_raw(a.as_dmatrix());
    let mut out = DMatrix::zeros(a.cols(), a.rows());
    for (i, &si) in s.iter().enumerate().take(retained(&s, rel_tol)) {
        let v = vh.row(i).adjoint();
        let uh = u.column(i).adjoint();
        out += (v * uh) * Complex64::new(1.0 / si, 0.0);
    }
    CMat::from_dmatrix(out)
}

/// Minimal-norm least-squares solution `design† · rhs`.
pub fn minimal_norm_lsq(design: &CMat, rhs: &CVec, rel_tol: f64) -> Result<CVec> {
    require_nonempty(design)?;
    check_tol(rel_tol)?;
    if rhs.len() != design.rows() {
        return Err(LinalgError::Shape(format!(
            "rhs has length {} but design has {} rows",
            rhs.len(),
            design.rows()
        )));
    }
    if let Some((i, _)) = rhs
        .iter()
        .enumerate()
        .find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::NonFinite { row: i, col: 0 });
    }
    let (u, s, vh) = svd_raw(design.as_dmatrix());
    let r = retained(&s, rel_tol);
    let mut x = DVector::zeros(design.cols());
    for (i, &si) in s.iter().enumerate().take(r) {
        let coef = u.column(i).dotc(rhs) / si;
        x += vh.row(i).adjoint() * coef;
    }
    Ok(x)
}

/// Rank with the relative threshold `rel_tol · σ_max`.
pub fn numerical_rank(a: &CMat, rel_tol: f64) -> Result<usize> {
    check_tol(rel_tol)?;
    Ok(svd(a).rank(rel_tol))
}

/// Number of singular values strictly above an absolute threshold.
pub fn rank_above(a: &CMat, abs_threshold: f64) -> usize {
    let (_, s, _) = svd_raw(a.as_dmatrix());
    s.iter().filter(|&&x| x > abs_threshold).count()
}

/// Orthonormal basis (as columns) of the column span, using the relative
/// rank threshold.
pub fn orthonormal_basis(cols: &CMat, rel_tol: f64) -> Result<CMat> {
    require_nonempty(cols)?;
    check_tol(rel_tol)?;
    let (u, s, _) = svd_raw(cols.as_dmatrix());
    let r = retained(&s, rel_tol);
    CMat::from_dmatrix(u.columns(0, r).into_owned())
}
