use serde::{Serialize, Serializer};
use sgs_linalg::serial::{fmt17, ser_cvec, ser_f64};
use sgs_linalg::Complex64;

/// Condition number of `Σ̂`, or a flag when it is numerically singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GramCondition {
    Finite(f64),
    RankDeficient,
}

impl Serialize for GramCondition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GramCondition::Finite(x) => ser_f64(x, s),
            GramCondition::RankDeficient => s.serialize_str("rank-deficient"),
        }
    }
}

impl std::fmt::Display for GramCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GramCondition::Finite(x) => f.write_str(&fmt17(*x)),
            GramCondition::RankDeficient => f.write_str("rank-deficient"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    #[serde(serialize_with = "ser_cvec")]
    pub x_tilde: Vec<Complex64>,
    #[serde(serialize_with = "ser_cvec")]
    pub f_tilde_coef: Vec<Complex64>,
    #[serde(serialize_with = "ser_f64")]
    pub residual_weighted: f64,
    #[serde(serialize_with = "ser_f64")]
    pub err_l2: f64,
    /// `‖P_{W_n^⊥} f‖`.
    #[serde(serialize_with = "ser_f64")]
    pub tail_err: f64,
    /// `K_{n,Ω} = ‖W_n Σ̂† Ĉ_Ω‖`.
    #[serde(serialize_with = "ser_f64")]
    pub k_factor: f64,
    pub bound_ok: bool,
    pub gram_condition: GramCondition,
    pub used_pseudo_inverse: bool,
}

impl ReconstructionReport {
    /// `tail_err · √(1 + K²)`.
    pub fn error_bound(&self) -> f64 {
        self.tail_err * (1.0 + self.k_factor * self.k_factor).sqrt()
    }
}
