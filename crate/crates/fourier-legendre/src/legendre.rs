use sgs_linalg::Complex64;

use crate::bessel::spherical_bessel_at_pi_multiple;

/// Normalized Legendre values `√(k+½)·P_k(x)` for `k = 0..=k_max`, from the
/// three-term recurrence. Orthonormal on `[−1, 1]`.
pub fn legendre_eval(k_max: usize, x: f64) -> Vec<f64> {
    debug_assert!(x.abs() <= 1.0, "legendre_eval needs |x| ≤ 1, got {x}");
    let mut p = vec![0.0; k_max + 1];
    p[0] = 1.0;
    if k_max >= 1 {
        p[1] = x;
    }
    for k in 1..k_max {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
    }
    for (k, v) in p.iter_mut().enumerate() {
        *v *= (k as f64 + 0.5).sqrt();
    }
    p
}

/// Fourier coefficient `(1/√2)∫ w_{k+1}(x) e^{−iπℓx} dx` of the normalized
/// Legendre polynomial of degree `k`, equal to `(−i)^k √(2k+1) j_k(πℓ)`.
pub fn legendre_fourier_coef(k: usize, ell: i64) -> Complex64 {
    legendre_fourier_column(ell, k + 1)[k]
}

/// Coefficients of degrees `0..n` at the single frequency `ℓ`.
pub fn legendre_fourier_column(ell: i64, n: usize) -> Vec<Complex64> {
    if n == 0 {
        return Vec::new();
    }
    let j = spherical_bessel_at_pi_multiple(ell, n - 1);
    j.iter()
        .enumerate()
        .map(|(k, &jk)| minus_i_pow(k) * ((2 * k + 1) as f64).sqrt() * jk)
        .collect()
}

fn minus_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn endpoint_values() {
        let p = legendre_eval(3, 1.0);
        assert!((p[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((p[1] - 1.5f64.sqrt()).abs() < 1e-15);
        let q = legendre_eval(4, -1.0);
        for (k, v) in q.iter().enumerate() {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - s * (k as f64 + 0.5).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(legendre_fourier_coef(0, 0), Complex64::new(1.0, 0.0));
        for ell in [-3, -1, 1, 4] {
            assert_eq!(legendre_fourier_coef(0, ell).norm(), 0.0);
        }
        let c = legendre_fourier_coef(1, 1);
        assert!(c.re.abs() < 1e-16);
        assert!((c.im + 3f64.sqrt() / PI).abs() < 1e-15);
        assert!((c.im + 0.55133).abs() < 1e-5);
        assert_eq!(legendre_fourier_coef(3, 0).norm(), 0.0);
    }

    #[test]
    fn parity_symmetry() {
        for ell in 1..20i64 {
            let a = legendre_fourier_column(ell, 15);
            let b = legendre_fourier_column(-ell, 15);
            for k in 0..15 {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((b[k] - a[k] * s).norm() <= 1e-12);
            }
        }
    }
}
