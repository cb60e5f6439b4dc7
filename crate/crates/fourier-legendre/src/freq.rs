/// Enumeration `σ: ℕ → ℤ` of Fourier frequencies as `0, 1, −1, 2, −2, …`.
///
/// Positions are 1-based to match `σ(1) = 0`, `σ(2ℓ) = ℓ`, `σ(2ℓ+1) = −ℓ`.
/// The first `J` positions form a frequency band that is symmetric when `J`
/// is odd.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrequencyMap;

impl FrequencyMap {
    /// Frequency at 1-based position `i ≥ 1`.
    pub fn sigma(i: usize) -> i64 {
        assert!(i >= 1, "frequency positions start at 1");
        frequency_at(i - 1)
    }

    /// 1-based position of frequency `ell`.
    pub fn sigma_inv(ell: i64) -> usize {
        position_of(ell) + 1
    }
}

/// Frequency at 0-based position `pos`.
pub fn frequency_at(pos: usize) -> i64 {
    let half = pos.div_ceil(2) as i64;
    if pos % 2 == 1 {
        half
    } else {
        -half
    }
}

/// 0-based position of frequency `ell`.
pub fn position_of(ell: i64) -> usize {
    if ell > 0 {
        2 * ell as usize - 1
    } else {
        2 * ell.unsigned_abs() as usize
    }
}
