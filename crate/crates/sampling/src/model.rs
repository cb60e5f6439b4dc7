use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sgs_linalg::{default_rel_tol, svd, CMat, Complex64};

use crate::{Result, SamplingError};

/// Frame bounds `A ≤ B` of the sampling system and Riesz/frame bounds
/// `C ≤ D` of the reconstruction system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeclaredBounds {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindFlags {
    pub sampling_is_orthonormal: bool,
    pub reconstruction_is_riesz: bool,
}

/// Sampling vectors (columns of `s_coef`, `N × J`) and reconstruction vectors
/// (columns of `w_coef`, `N × K`) in ambient orthonormal coordinates.
/// Immutable once built.
#[derive(Debug, Clone)]
pub struct FrameModel {
    s_coef: CMat,
    w_coef: CMat,
    declared_bounds: Option<DeclaredBounds>,
    flags: KindFlags,
    /// Nonzero entries of each sampling column, as (ambient row, value).
    s_sparse: Vec<Vec<(usize, Complex64)>>,
}

/// Tolerance for the numerical orthonormality test on `s_coef`.
const ORTHONORMAL_TOL: f64 = 1e-8;

pub fn build_frame_model(
    s_coef: CMat,
    w_coef: CMat,
    declared_bounds: Option<DeclaredBounds>,
) -> Result<FrameModel> {
    if s_coef.rows() != w_coef.rows() {
        return Err(SamplingError::RowMismatch {
            s_rows: s_coef.rows(),
            w_rows: w_coef.rows(),
        });
    }
    if s_coef.is_empty() || w_coef.is_empty() {
        return Err(SamplingError::InvalidModel(
            "need at least one ambient coordinate, one sampling and one reconstruction vector"
                .into(),
        ));
    }
    if let Some(b) = declared_bounds {
        let ok = [b.a, b.b, b.c, b.d].iter().all(|x| x.is_finite() && *x > 0.0)
            && b.a <= b.b
            && b.c <= b.d;
        if !ok {
            return Err(SamplingError::InvalidModel(format!(
                "declared bounds must be positive with A ≤ B and C ≤ D, got {b:?}"
            )));
        }
    }
    let sm = s_coef.as_dmatrix();
    let s_sparse: Vec<Vec<(usize, Complex64)>> = (0..sm.ncols())
        .map(|j| {
            sm.column(j)
                .iter()
                .enumerate()
                .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                .map(|(r, &z)| (r, z))
                .collect()
        })
        .collect();
    let sampling_is_orthonormal = sparse_gram_is_identity(&s_sparse, sm.nrows());
    let ws = svd(&w_coef).s;
    let smax = ws[0];
    let reconstruction_is_riesz = w_coef.cols() <= w_coef.rows()
        && smax > 0.0
        && ws[ws.len() - 1] > default_rel_tol(w_coef.rows(), w_coef.cols()) * smax;
    Ok(FrameModel {
        s_coef,
        w_coef,
        declared_bounds,
        flags: KindFlags {
            sampling_is_orthonormal,
            reconstruction_is_riesz,
        },
        s_sparse,
    })
}

/// Checks `SᴴS = I` to [`ORTHONORMAL_TOL`] using only overlapping supports.
fn sparse_gram_is_identity(cols: &[Vec<(usize, Complex64)>], rows: usize) -> bool {
    let mut by_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(r, z) in col {
            by_row[r].push((j, z));
        }
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); cols.len()];
    let mut touched = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for &(r, z) in col {
            for &(k, y) in &by_row[r] {
                if k >= j {
                    if acc[k] == Complex64::new(0.0, 0.0) {
                        touched.push(k);
                    }
                    acc[k] += z.conj() * y;
                }
            }
        }
        if (acc[j] - 1.0).norm() > ORTHONORMAL_TOL {
            return false;
        }
        for &k in &touched {
            if k != j && acc[k].norm() > ORTHONORMAL_TOL {
                return false;
            }
            acc[k] = Complex64::new(0.0, 0.0);
        }
        acc[j] = Complex64::new(0.0, 0.0);
        touched.clear();
    }
    true
}

impl FrameModel {
    pub fn ambient_dim(&self) -> usize {
        self.s_coef.rows()
    }

    /// Number of sampling vectors `J`.
    pub fn num_samples(&self) -> usize {
        self.s_coef.cols()
    }

    /// Number of reconstruction vectors `K`.
    pub fn num_recon(&self) -> usize {
        self.w_coef.cols()
    }

    pub fn s_coef(&self) -> &CMat {
        &self.s_coef
    }

    pub fn w_coef(&self) -> &CMat {
        &self.w_coef
    }

    pub fn declared_bounds(&self) -> Option<DeclaredBounds> {
        self.declared_bounds
    }

    pub fn flags(&self) -> KindFlags {
        self.flags
    }

    pub(crate) fn s_column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.s_sparse[j]
    }

    /// `⟨s_j, f⟩` for every sampling vector.
    pub fn analysis(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.s_sparse
            .iter()
            .map(|col| col.iter().map(|&(r, z)| z.conj() * f[r]).sum())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct FrameModelWire {
    ambient_dim: usize,
    s_coef: CMat,
    w_coef: CMat,
    #[serde(default)]
    declared_bounds: Option<DeclaredBounds>,
    #[serde(default)]
    kind_flags: Option<KindFlags>,
}

impl Serialize for FrameModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrameModelWire {
            ambient_dim: self.ambient_dim(),
            s_coef: self.s_coef.clone(),
            w_coef: self.w_coef.clone(),
            declared_bounds: self.declared_bounds,
            kind_flags: Some(self.flags),
        }
        .serialize(s)
    }
}

/// Flags in the input are ignored and recomputed.
impl<'de> Deserialize<'de> for FrameModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FrameModelWire::deserialize(d)?;
        if w.ambient_dim != w.s_coef.rows() {
            return Err(serde::de::Error::custom(format!(
                "ambient_dim {} does not match s_coef rows {}",
                w.ambient_dim,
                w.s_coef.rows()
            )));
        }
        build_frame_model(w.s_coef, w.w_coef, w.declared_bounds).map_err(serde::de::Error::custom)
    }
}
