use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::{LeverageProfile, Result, SamplingError};

/// The multiset `Ω` of drawn sampling indices (0-based, with repetition),
/// together with the seed and the digest of the distribution used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleDraw {
    pub indices: Vec<usize>,
    pub seed: u64,
    pub distribution_id: String,
}

impl SampleDraw {
    pub fn m(&self) -> usize {
        self.indices.len()
    }

    /// A draw with prescribed indices, checked against the support of `p`.
    pub fn from_indices(prof: &LeverageProfile, indices: Vec<usize>, seed: u64) -> Result<Self> {
        let d = SampleDraw {
            indices,
            seed,
            distribution_id: prof.distribution_id.clone(),
        };
        d.check(prof)?;
        Ok(d)
    }

    pub(crate) fn check(&self, prof: &LeverageProfile) -> Result<()> {
        if self.distribution_id != prof.distribution_id {
            return Err(SamplingError::DrawMismatch(
                "draw was made from a different distribution".into(),
            ));
        }
        if self.indices.is_empty() {
            return Err(SamplingError::DrawMismatch("empty draw".into()));
        }
        for &i in &self.indices {
            if i >= prof.p.len() || prof.p[i] <= 0.0 {
                return Err(SamplingError::DrawMismatch(format!(
                    "index {} (1-based) is outside supp(p)",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct DrawWire<'a> {
    indices: Vec<usize>,
    m: usize,
    seed: u64,
    distribution_id: &'a str,
}

impl Serialize for SampleDraw {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DrawWire {
            indices: self.indices.iter().map(|i| i + 1).collect(),
            m: self.m(),
            seed: self.seed,
            distribution_id: &self.distribution_id,
        }
        .serialize(s)
    }
}

/// `m` i.i.d. indices from `p` by inverse-CDF sampling with a ChaCha8 stream
/// seeded from `seed`.
pub fn draw_samples(prof: &LeverageProfile, m: usize, seed: u64) -> Result<SampleDraw> {
    if m == 0 {
        return Err(SamplingError::InvalidDistribution("m must be at least 1".into()));
    }
    let mut cum = Vec::with_capacity(prof.p.len());
    let mut acc = 0.0;
    for &x in &prof.p {
        acc += x;
        cum.push(acc);
    }
    let last = prof
        .p
        .iter()
        .rposition(|&x| x > 0.0)
        .ok_or_else(|| SamplingError::InvalidDistribution("p has empty support".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = (0..m)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cum.partition_point(|&c| c <= u).min(last)
        })
        .collect();
    Ok(SampleDraw {
        indices,
        seed,
        distribution_id: prof.distribution_id.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_frame_model, leverage_profile, PSpec};
    use sgs_linalg::CMat;

    fn profile(dim: usize, n: usize) -> LeverageProfile {
        let model = build_frame_model(CMat::identity(dim), CMat::identity(dim), None).unwrap();
        leverage_profile(&model, n, &PSpec::Leverage).unwrap()
    }

    #[test]
    fn point_mass_draws_one_index() {
        let prof = profile(5, 1);
        let d = draw_samples(&prof, 50, 123).unwrap();
        assert!(d.indices.iter().all(|&i| i == 0));
        assert_eq!(d.m(), 50);
    }

    #[test]
    fn uniform_frequencies() {
        let prof = profile(6, 4);
        let d = draw_samples(&prof, 100_000, 2024).unwrap();
        let mut counts = [0usize; 6];
        for &i in &d.indices {
            counts[i] += 1;
        }
        for &c in &counts[..4] {
            assert!((c as f64 / 1e5 - 0.25).abs() < 0.01);
        }
        assert_eq!(&counts[4..], &[0, 0]);
    }

    #[test]
    fn same_seed_same_draw() {
        let prof = profile(6, 4);
        let a = draw_samples(&prof, 1000, 77).unwrap();
        let b = draw_samples(&prof, 1000, 77).unwrap();
        let c = draw_samples(&prof, 1000, 78).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.indices, c.indices);
        assert!(draw_samples(&prof, 0, 1).is_err());
    }

    #[test]
    fn serialized_indices_are_one_based() {
        let prof = profile(3, 1);
        let d = draw_samples(&prof, 2, 0).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.starts_with("{\"indices\":[1,1],\"m\":2,\"seed\":0,"), "{text}");
    }
}
