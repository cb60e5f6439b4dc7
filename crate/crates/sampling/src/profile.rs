use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize, Serializer};
use sgs_linalg::serial::{ser_f64, ser_vec_f64, Cplx};
use sgs_linalg::{default_rel_tol, svd, CMat, Complex64};
use sha2::{Digest, Sha256};

use crate::context::SamplingContext;
use crate::{FrameModel, Result, SamplingError, SUPPORT_TOL};

/// Choice of sampling distribution over the `J` sampling indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PSpec {
    /// `p_j = ‖v_j‖² / tr(Σ)`.
    Leverage,
    /// Uniform over `{j : ‖v_j‖ > 0}`.
    UniformOnSupport,
    /// User weights over all `J` indices, renormalized to sum 1.
    Custom(Vec<f64>),
}

/// Interaction vectors, Gram section and sampling distribution for a model
/// and reconstruction dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeverageProfile {
    pub n: usize,
    /// `n × J`; column `j` is `v_j = W_nᴴ s_j`.
    pub v: DMatrix<Complex64>,
    pub sigma: CMat,
    pub trace_sigma: f64,
    pub p: Vec<f64>,
    pub tail_mass: f64,
    /// Smallest singular value of `Σ` above the rank threshold.
    pub lambda0: f64,
    /// Numerical rank of `Σ` (module-wide relative threshold).
    pub sigma_rank: usize,
    /// Hex SHA-256 of the bit patterns of `p`.
    pub distribution_id: String,
}

pub(crate) fn digest_p(p: &[f64]) -> String {
    let mut h = Sha256::new();
    for x in p {
        h.update(x.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

impl LeverageProfile {
    pub fn num_samples(&self) -> usize {
        self.p.len()
    }

    /// Leverage score `‖v_j‖²`.
    pub fn leverage(&self, j: usize) -> f64 {
        self.v.column(j).norm_squared()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.p.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(j, _)| j)
    }

    /// Rank threshold used for every decision about `Σ` and `Σ̂`.
    pub fn rel_tol(&self) -> f64 {
        default_rel_tol(self.n, self.n)
    }
}

pub fn leverage_profile(model: &FrameModel, n: usize, p_spec: &PSpec) -> Result<LeverageProfile> {
    let k = model.num_recon();
    if n == 0 || n > k {
        return Err(SamplingError::InvalidN { n, k });
    }
    let j_count = model.num_samples();
    let w = model.w_coef().as_dmatrix();
    let mut v = DMatrix::zeros(n, j_count);
    for j in 0..j_count {
        for &(r, z) in model.s_column(j) {
            for kk in 0..n {
                v[(kk, j)] += w[(r, kk)].conj() * z;
            }
        }
    }
    let sigma_m = &v * v.adjoint();
    let lev: Vec<f64> = (0..j_count).map(|j| v.column(j).norm_squared()).collect();
    let trace_sigma: f64 = lev.iter().sum();
    if trace_sigma <= 0.0 {
        return Err(SamplingError::DegenerateModel);
    }
    let p: Vec<f64> = match p_spec {
        PSpec::Leverage => lev.iter().map(|&x| x / trace_sigma).collect(),
        PSpec::UniformOnSupport => {
            let supp = lev.iter().filter(|&&x| x.sqrt() > SUPPORT_TOL).count();
            lev.iter()
                .map(|&x| if x.sqrt() > SUPPORT_TOL { 1.0 / supp as f64 } else { 0.0 })
                .collect()
        }
        PSpec::Custom(weights) => {
            if weights.len() != j_count {
                return Err(SamplingError::InvalidDistribution(format!(
                    "custom p has {} entries, the model has J = {j_count}",
                    weights.len()
                )));
            }
            if let Some(x) = weights.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(SamplingError::InvalidDistribution(format!(
                    "custom p has an invalid weight {x}"
                )));
            }
            let total: f64 = weights.iter().sum();
            if total <= 0.0 {
                return Err(SamplingError::InvalidDistribution("custom p sums to 0".into()));
            }
            for (j, (&x, &l)) in weights.iter().zip(&lev).enumerate() {
                if x == 0.0 && l.sqrt() > SUPPORT_TOL {
                    return Err(SamplingError::SupportViolation {
                        index: j + 1,
                        norm: l.sqrt(),
                    });
                }
            }
            weights.iter().map(|&x| x / total).collect()
        }
    };
    let sigma = CMat::from_dmatrix(sigma_m)?;
    let f = svd(&sigma);
    let rel_tol = default_rel_tol(n, n);
    let sigma_rank = f.rank(rel_tol);
    let lambda0 = if sigma_rank == 0 { 0.0 } else { f.s[sigma_rank - 1] };
    let distribution_id = digest_p(&p);
    Ok(LeverageProfile {
        n,
        v,
        sigma,
        trace_sigma,
        p,
        tail_mass: 0.0,
        lambda0,
        sigma_rank,
        distribution_id,
    })
}

#[derive(Serialize)]
struct ProfileWire<'a> {
    n: usize,
    v: Vec<Vec<Cplx>>,
    sigma: &'a CMat,
    #[serde(serialize_with = "ser_f64")]
    trace_sigma: f64,
    #[serde(serialize_with = "ser_vec_f64")]
    p: &'a [f64],
    #[serde(serialize_with = "ser_f64")]
    tail_mass: f64,
    #[serde(serialize_with = "ser_f64")]
    lambda0: f64,
    distribution_id: &'a str,
}

impl Serialize for LeverageProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileWire {
            n: self.n,
            v: (0..self.v.ncols())
                .map(|j| self.v.column(j).iter().map(|&z| Cplx(z)).collect())
                .collect(),
            sigma: &self.sigma,
            trace_sigma: self.trace_sigma,
            p: &self.p,
            tail_mass: self.tail_mass,
            lambda0: self.lambda0,
            distribution_id: &self.distribution_id,
        }
        .serialize(s)
    }
}

/// Coherence and spectral scalars of a (model, profile) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceProfile {
    #[serde(rename = "R", serialize_with = "ser_f64")]
    pub r: f64,
    #[serde(rename = "R_prime", serialize_with = "ser_f64")]
    pub r_prime: f64,
    #[serde(rename = "R_double", serialize_with = "ser_f64")]
    pub r_double: f64,
    #[serde(rename = "T_norm", serialize_with = "ser_f64")]
    pub t_norm: f64,
    #[serde(rename = "K_scale", serialize_with = "ser_f64")]
    pub k_scale: f64,
    #[serde(rename = "Lambda", serialize_with = "ser_f64")]
    pub lambda: f64,
    #[serde(serialize_with = "ser_f64")]
    pub sigma_norm: f64,
    /// `‖Σ⁻¹‖`, or `‖Σ†‖` when `Σ` is rank-deficient.
    #[serde(serialize_with = "ser_f64")]
    pub sigma_inv_norm: f64,
    #[serde(rename = "C_norm", serialize_with = "ser_f64")]
    pub c_norm: f64,
}

pub fn coherence_profile(model: &FrameModel, prof: &LeverageProfile) -> Result<CoherenceProfile> {
    Ok(SamplingContext::new(model, prof)?.coherence())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChristoffelEntry {
    /// 0-based sampling index.
    #[serde(skip)]
    pub j: usize,
    #[serde(serialize_with = "ser_f64")]
    pub k_p: f64,
    /// `K_P(j)/p_j`, or `None` outside the support of `p`.
    #[serde(serialize_with = "sgs_linalg::serial::ser_opt_f64")]
    pub weighted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChristoffelProfile {
    pub entries: Vec<ChristoffelEntry>,
    #[serde(serialize_with = "ser_f64")]
    pub kappa_w: f64,
}

/// Christoffel function `K_P(j) = ⟨Σ† v_j, v_j⟩` and
/// `κ_w = max_{supp p} K_P(j)/p_j`.
pub fn christoffel_profile(prof: &LeverageProfile) -> Result<ChristoffelProfile> {
    let pinv = sgs_linalg::pseudo_inverse(&prof.sigma, prof.rel_tol())?;
    let pm = pinv.as_dmatrix();
    let mut kappa_w: f64 = 0.0;
    let entries = (0..prof.num_samples())
        .map(|j| {
            let vj: DVector<Complex64> = prof.v.column(j).into_owned();
            let k_p = vj.dotc(&(pm * &vj)).re.max(0.0);
            let weighted = (prof.p[j] > 0.0).then(|| k_p / prof.p[j]);
            if let Some(w) = weighted {
                kappa_w = kappa_w.max(w);
            }
            ChristoffelEntry { j, k_p, weighted }
        })
        .collect();
    Ok(ChristoffelProfile { entries, kappa_w })
}
