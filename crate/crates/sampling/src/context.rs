use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use sgs_linalg::serial::ser_f64;
use sgs_linalg::{
    default_rel_tol, minimal_norm_lsq, operator_norm, projector_from_columns, range_distance, svd, CMat, CVec, Complex64,
};

use crate::{
    CoherenceProfile, FrameModel, GramCondition, LeverageProfile, ReconstructionReport, Result,
    SampleDraw, SamplingError, RANGE_TOL,
};

/// Outcome of comparing `Ran(Σ̂_Ω)` with `Ran(Σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeCheck {
    pub equal: bool,
    #[serde(serialize_with = "ser_f64")]
    pub distance: f64,
}

/// Per-trial deviations recorded alongside a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialDiagnostics {
    /// `‖Σ̂_Ω − Σ‖`.
    pub gram_dev: f64,
    /// `‖Ĉ_Ω − C‖`.
    pub cross_dev: f64,
    pub full_rank: bool,
    pub range: RangeCheck,
}

/// Quantities derived once from a (model, profile) pair and reused across
/// draws. Free functions such as [`reconstruct`] build one internally.
pub struct SamplingContext<'a> {
    model: &'a FrameModel,
    prof: &'a LeverageProfile,
    /// Orthonormal basis of `Ran(W_n)`, `N × r`.
    q: DMatrix<Complex64>,
    /// `W_n = q · w_half`, `r × n`.
    w_half: DMatrix<Complex64>,
    /// `qᴴ S`, `r × J`.
    qs: DMatrix<Complex64>,
    /// `W_n` spans the whole ambient space, so every residual vanishes.
    perp_zero: bool,
    /// `‖u_j‖²` with `u_j = (I − P_{W_n}) s_j`.
    u_norm_sq: Vec<f64>,
    /// `C = Σ_j v_j u_jᴴ`, `n × N`.
    c: DMatrix<Complex64>,
    sigma_proj: CMat,
}

fn multiplicities(draw: &SampleDraw) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for &i in &draw.indices {
        *counts.entry(i).or_insert(0) += 1;
    }
    counts
}

impl<'a> SamplingContext<'a> {
    pub fn new(model: &'a FrameModel, prof: &'a LeverageProfile) -> Result<Self> {
        if prof.num_samples() != model.num_samples() || prof.n > model.num_recon() {
            return Err(SamplingError::Shape(
                "profile was not built from this model".into(),
            ));
        }
        let n = prof.n;
        let big_n = model.ambient_dim();
        let j_count = model.num_samples();
        let wn = model.w_coef().leading_columns(n);
        let f = svd(&wn);
        let r = f.rank(default_rel_tol(big_n, n));
        let q = f.u.as_dmatrix().columns(0, r).into_owned();
        let mut w_half = f.vh.as_dmatrix().rows(0, r).into_owned();
        for (i, mut row) in w_half.row_iter_mut().enumerate() {
            row *= Complex64::new(f.s[i], 0.0);
        }
        let perp_zero = r == big_n;

        let mut qs = DMatrix::zeros(r, j_count);
        for j in 0..j_count {
            for &(row, z) in model.s_column(j) {
                for k in 0..r {
                    qs[(k, j)] += q[(row, k)].conj() * z;
                }
            }
        }

        let mut u_norm_sq = vec![0.0; j_count];
        let mut c = DMatrix::zeros(n, big_n);
        if !perp_zero {
            let mut u = DVector::<Complex64>::zeros(big_n);
            for (j, slot) in u_norm_sq.iter_mut().enumerate() {
                u.gemv(Complex64::new(-1.0, 0.0), &q, &qs.column(j), Complex64::new(0.0, 0.0));
                for &(row, z) in model.s_column(j) {
                    u[row] += z;
                }
                *slot = u.norm_squared();
            }
            // C = V Sᴴ − (V qsᴴ) qᴴ
            let v = &prof.v;
            for j in 0..j_count {
                for &(row, z) in model.s_column(j) {
                    let zc = z.conj();
                    for k in 0..n {
                        c[(k, row)] += v[(k, j)] * zc;
                    }
                }
            }
            let vq = v * qs.adjoint();
            c -= vq * q.adjoint();
        }

        let sigma_proj = projector_from_columns(&prof.sigma, prof.rel_tol())?;
        Ok(SamplingContext {
            model,
            prof,
            q,
            w_half,
            qs,
            perp_zero,
            u_norm_sq,
            c,
            sigma_proj,
        })
    }

    pub fn model(&self) -> &FrameModel {
        self.model
    }

    pub fn profile(&self) -> &LeverageProfile {
        self.prof
    }

    /// The limiting cross-term `C`.
    pub fn cross_term(&self) -> CMat {
        CMat::from_dmatrix(self.c.clone()).expect("finite")
    }

    /// `‖u_j‖²` for every sampling index.
    pub fn residual_norms_sq(&self) -> &[f64] {
        &self.u_norm_sq
    }

    pub fn coherence(&self) -> CoherenceProfile {
        let prof = self.prof;
        let mut r: f64 = 0.0;
        let mut r_prime: f64 = 0.0;
        for j in prof.support() {
            r = r.max(prof.leverage(j) / prof.p[j]);
            r_prime = r_prime.max(self.u_norm_sq[j] / prof.p[j]);
        }
        let t_norm = self.t_norm();
        let sigma_norm = operator_norm(&prof.sigma).expect("nonempty");
        let sigma_inv_norm = 1.0 / prof.lambda0;
        let c_norm = raw_norm(&self.c);
        CoherenceProfile {
            r,
            r_prime,
            r_double: r.max(r_prime),
            t_norm,
            k_scale: sigma_norm.max(t_norm),
            lambda: 1.0 + sigma_inv_norm + c_norm,
            sigma_norm,
            sigma_inv_norm,
            c_norm,
        }
    }

    /// `‖Σ_j u_j u_jᴴ‖`, the squared norm of the residual synthesis matrix.
    fn t_norm(&self) -> f64 {
        if self.perp_zero {
            return 0.0;
        }
        let (r, j_count) = self.qs.shape();
        if self.model.flags().sampling_is_orthonormal {
            // Sᴴ P⊥ S = I − qsᴴ qs, whose top eigenvalue is 1 − σ_min(qs)².
            if j_count > r {
                return 1.0;
            }
            let s = svd(&CMat::from_dmatrix(self.qs.clone()).expect("finite")).s;
            let smin = s.last().copied().unwrap_or(0.0);
            return (1.0 - smin * smin).max(0.0);
        }
        let big_n = self.model.ambient_dim();
        let mut u = DMatrix::<Complex64>::zeros(big_n, j_count);
        u.gemm(Complex64::new(-1.0, 0.0), &self.q, &self.qs, Complex64::new(0.0, 0.0));
        for j in 0..j_count {
            for &(row, z) in self.model.s_column(j) {
                u[(row, j)] += z;
            }
        }
        let s = raw_norm(&u);
        s * s
    }

    fn weights(&self, draw: &SampleDraw) -> Vec<(usize, f64)> {
        let m = draw.m() as f64;
        multiplicities(draw)
            .into_iter()
            .map(|(j, c)| (j, c as f64 / (m * self.prof.p[j])))
            .collect()
    }

    /// `Σ̂_Ω = (1/m) Σ_t v_{i_t} v_{i_t}ᴴ / p_{i_t}`.
    pub fn empirical_gram(&self, draw: &SampleDraw) -> Result<CMat> {
        draw.check(self.prof)?;
        Ok(CMat::from_dmatrix(gram_raw(self.prof, draw))?)
    }

    /// `Ĉ_Ω = (1/m) Σ_t v_{i_t} u_{i_t}ᴴ / p_{i_t}`, an `n × N` matrix.
    pub fn empirical_cross_term(&self, draw: &SampleDraw) -> Result<CMat> {
        draw.check(self.prof)?;
        Ok(CMat::from_dmatrix(self.cross_raw(draw))?)
    }

    fn cross_raw(&self, draw: &SampleDraw) -> DMatrix<Complex64> {
        let n = self.prof.n;
        let big_n = self.model.ambient_dim();
        let mut out = DMatrix::zeros(n, big_n);
        if self.perp_zero {
            return out;
        }
        let r = self.q.ncols();
        let mut m2 = DMatrix::<Complex64>::zeros(n, r);
        for (j, w) in self.weights(draw) {
            let wv: DVector<Complex64> = self.prof.v.column(j) * Complex64::new(w, 0.0);
            for &(row, z) in self.model.s_column(j) {
                let zc = z.conj();
                for k in 0..n {
                    out[(k, row)] += wv[k] * zc;
                }
            }
            m2.gerc(Complex64::new(1.0, 0.0), &wv, &self.qs.column(j), Complex64::new(1.0, 0.0));
        }
        out.gemm(Complex64::new(-1.0, 0.0), &m2, &self.q.adjoint(), Complex64::new(1.0, 0.0));
        out
    }

    /// Weighted least-squares design and right-hand side: row `t` is
    /// `(m p_{i_t})^{-1/2} v_{i_t}ᴴ` and entry `t` is
    /// `(m p_{i_t})^{-1/2} ⟨s_{i_t}, f⟩`.
    pub fn weighted_system(&self, draw: &SampleDraw, f: &[Complex64]) -> Result<(CMat, CVec)> {
        draw.check(self.prof)?;
        self.check_f(f)?;
        Ok(self.weighted_system_raw(draw, f))
    }

    fn check_f(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.model.ambient_dim() {
            return Err(SamplingError::Shape(format!(
                "f has {} coordinates, the ambient dimension is {}",
                f.len(),
                self.model.ambient_dim()
            )));
        }
        if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SamplingError::Shape("f has a non-finite coordinate".into()));
        }
        Ok(())
    }

    fn weighted_system_raw(&self, draw: &SampleDraw, f: &[Complex64]) -> (CMat, CVec) {
        let m = draw.m();
        let n = self.prof.n;
        let mut design = DMatrix::zeros(m, n);
        let mut rhs = CVec::zeros(m);
        for (t, &j) in draw.indices.iter().enumerate() {
            let scale = 1.0 / (m as f64 * self.prof.p[j]).sqrt();
            for k in 0..n {
                design[(t, k)] = self.prof.v[(k, j)].conj() * scale;
            }
            let y: Complex64 = self
                .model
                .s_column(j)
                .iter()
                .map(|&(row, z)| z.conj() * f[row])
                .sum();
            rhs[t] = y * scale;
        }
        (CMat::from_dmatrix(design).expect("finite"), rhs)
    }

    pub fn reconstruct(&self, draw: &SampleDraw, f: &[Complex64]) -> Result<ReconstructionReport> {
        Ok(self.reconstruct_with_diagnostics(draw, f)?.0)
    }

    /// Reconstruction plus the Monte Carlo deviations of the same draw.
    pub fn reconstruct_with_diagnostics(
        &self,
        draw: &SampleDraw,
        f: &[Complex64],
    ) -> Result<(ReconstructionReport, TrialDiagnostics)> {
        draw.check(self.prof)?;
        self.check_f(f)?;
        let n = self.prof.n;
        let (design, rhs) = self.weighted_system_raw(draw, f);
        // Rank of D at threshold √tol is the rank of Σ̂ = DᴴD at threshold tol.
        let tol_d = self.prof.rel_tol().sqrt();
        let x = minimal_norm_lsq(&design, &rhs, tol_d)?;
        let fd = svd(&design);
        let rank = fd.rank(tol_d);
        let full_rank = rank == n;
        let gram_condition = if full_rank {
            let ratio = fd.s[0] / fd.s[n - 1];
            GramCondition::Finite(ratio * ratio)
        } else {
            GramCondition::RankDeficient
        };
        // Σ̂† = V_r diag(1/s²) V_rᴴ from the SVD of the design.
        let vr = fd.vh.as_dmatrix().rows(0, rank).adjoint();
        let mut scaled = vr.clone();
        for (i, mut col) in scaled.column_iter_mut().enumerate() {
            col /= Complex64::new(fd.s[i] * fd.s[i], 0.0);
        }
        let sigma_hat_pinv = scaled * vr.adjoint();

        let c_hat = self.cross_raw(draw);
        let k_factor = if self.perp_zero {
            0.0
        } else {
            raw_norm(&(&self.w_half * &sigma_hat_pinv * &c_hat))
        };

        let dm = design.as_dmatrix();
        let residual_weighted = (dm * &x - &rhs).norm();
        let wn = self.model.w_coef().as_dmatrix().columns(0, n);
        let f_tilde = wn * &x;
        let f_vec = CVec::from_column_slice(f);
        let err_l2 = (&f_vec - &f_tilde).norm();
        let tail_err = if self.perp_zero {
            0.0
        } else {
            let proj = &self.q * (self.q.adjoint() * &f_vec);
            (&f_vec - proj).norm()
        };
        let bound_ok = err_l2 <= tail_err * (1.0 + k_factor * k_factor).sqrt() + 1e-8;
        let report = ReconstructionReport {
            x_tilde: x.iter().copied().collect(),
            f_tilde_coef: f_tilde.iter().copied().collect(),
            residual_weighted,
            err_l2,
            tail_err,
            k_factor,
            bound_ok,
            gram_condition,
            used_pseudo_inverse: !full_rank,
        };

        let sigma_hat = gram_raw(self.prof, draw);
        let gram_dev = raw_norm(&(&sigma_hat - self.prof.sigma.as_dmatrix()));
        let cross_dev = raw_norm(&(&c_hat - &self.c));
        let range = self.range_check_raw(sigma_hat)?;
        Ok((
            report,
            TrialDiagnostics {
                gram_dev,
                cross_dev,
                full_rank,
                range,
            },
        ))
    }

    pub fn range_stability(&self, draw: &SampleDraw) -> Result<RangeCheck> {
        draw.check(self.prof)?;
        self.range_check_raw(gram_raw(self.prof, draw))
    }

    fn range_check_raw(&self, sigma_hat: DMatrix<Complex64>) -> Result<RangeCheck> {
        let p_hat = projector_from_columns(&CMat::from_dmatrix(sigma_hat)?, self.prof.rel_tol())?;
        let distance = range_distance(&p_hat, &self.sigma_proj)?;
        Ok(RangeCheck {
            equal: distance <= RANGE_TOL,
            distance,
        })
    }
}

fn raw_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    operator_norm(&CMat::from_dmatrix(m.clone()).expect("finite")).expect("nonempty")
}

fn gram_raw(prof: &LeverageProfile, draw: &SampleDraw) -> DMatrix<Complex64> {
    let n = prof.n;
    let m = draw.m() as f64;
    let mut out = DMatrix::zeros(n, n);
    for (j, c) in multiplicities(draw) {
        let w = c as f64 / (m * prof.p[j]);
        let v = prof.v.column(j);
        out.gerc(Complex64::new(w, 0.0), &v, &v, Complex64::new(1.0, 0.0));
    }
    out
}

pub fn empirical_gram(prof: &LeverageProfile, draw: &SampleDraw) -> Result<CMat> {
    draw.check(prof)?;
    Ok(CMat::from_dmatrix(gram_raw(prof, draw))?)
}

pub fn empirical_cross_term(
    model: &FrameModel,
    prof: &LeverageProfile,
    draw: &SampleDraw,
) -> Result<CMat> {
    SamplingContext::new(model, prof)?.empirical_cross_term(draw)
}

pub fn reconstruct(
    model: &FrameModel,
    prof: &LeverageProfile,
    draw: &SampleDraw,
    f_coef: &[Complex64],
) -> Result<ReconstructionReport> {
    SamplingContext::new(model, prof)?.reconstruct(draw, f_coef)
}

pub fn range_stability_check(prof: &LeverageProfile, draw: &SampleDraw) -> Result<RangeCheck> {
    draw.check(prof)?;
    let p_hat = projector_from_columns(&CMat::from_dmatrix(gram_raw(prof, draw))?, prof.rel_tol())?;
    let p = projector_from_columns(&prof.sigma, prof.rel_tol())?;
    let distance = range_distance(&p_hat, &p)?;
    Ok(RangeCheck {
        equal: distance <= RANGE_TOL,
        distance,
    })
}

#[cfg(test)]
mod tests;
