use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{serial, LinalgError, Result};

/// Complex column vector.
pub type CVec = DVector<Complex64>;

/// Dense complex matrix whose entries are guaranteed finite.
///
/// Storage is delegated to nalgebra (column-major); the external serialized
/// form is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat(DMatrix<Complex64>);

fn check_finite(m: &DMatrix<Complex64>) -> Result<()> {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

impl CMat {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        check_finite(&m)?;
        Ok(CMat(m))
    }

    pub fn identity(n: usize) -> Self {
        CMat(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat(DMatrix::zeros(rows, cols))
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = DMatrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        CMat(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0 || self.0.ncols() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat(self.0.adjoint())
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    /// Matrix product; returns a shape error on inner-dimension mismatch.
    pub fn mul(&self, other: &CMat) -> Result<CMat> {
        if self.cols() != other.rows() {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        CMat::from_dmatrix(&self.0 * &other.0)
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        if self.0.shape() != other.0.shape() {
            return Err(LinalgError::Shape(format!(
                "cannot subtract {:?} and {:?}",
                self.0.shape(),
                other.0.shape()
            )));
        }
        CMat::from_dmatrix(&self.0 - &other.0)
    }

    /// Copy of the first `n` columns.
    pub fn leading_columns(&self, n: usize) -> CMat {
        CMat(self.0.columns(0, n.min(self.cols())).into_owned())
    }

    /// Largest entrywise modulus of `self - other` (shapes must agree).
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "max_abs_diff shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl AsRef<DMatrix<Complex64>> for CMat {
    fn as_ref(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

#[derive(Serialize, Deserialize)]
struct CMatWire {
    rows: usize,
    cols: usize,
    entries: Vec<serial::Cplx>,
}

impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CMatWire {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.row_major().into_iter().map(serial::Cplx).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CMatWire::deserialize(d)?;
        CMat::new(w.rows, w.cols, w.entries.into_iter().map(|c| c.0).collect())
            .map_err(serde::de::Error::custom)
    }
}
