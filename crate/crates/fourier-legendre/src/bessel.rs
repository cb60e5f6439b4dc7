use std::f64::consts::PI;

/// Values above this are rescaled during the downward sweep.
const RESCALE_AT: f64 = 1e250;

/// `j_0(x), …, j_{k_max}(x)`, the spherical Bessel functions of the first kind.
///
/// Upward recurrence is used while `k ≤ |x|`, where it is stable. Higher
/// orders come from a Miller downward sweep normalized against the upward
/// values (or against `j_0` when `|x| < 1`).
pub fn spherical_bessel_seq(x: f64, k_max: usize) -> Vec<f64> {
    if x == 0.0 {
        return origin(k_max);
    }
    let ax = x.abs();
    let (s, c) = ax.sin_cos();
    let j0 = s / ax;
    let j1 = s / (ax * ax) - c / ax;
    let mut out = from_seeds(ax, j0, j1, k_max);
    if x < 0.0 {
        flip_odd(&mut out);
    }
    out
}

/// `j_k(πℓ)` for `k = 0..=k_max`, seeded with the exact values
/// `j_0(πℓ) = 0` and `j_1(πℓ) = (−1)^{ℓ+1}/(πℓ)`.
pub fn spherical_bessel_at_pi_multiple(ell: i64, k_max: usize) -> Vec<f64> {
    if ell == 0 {
        return origin(k_max);
    }
    let ax = PI * ell.unsigned_abs() as f64;
    let sign = if ell.unsigned_abs() % 2 == 1 { 1.0 } else { -1.0 };
    let mut out = from_seeds(ax, 0.0, sign / ax, k_max);
    if ell < 0 {
        flip_odd(&mut out);
    }
    out
}

fn origin(k_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    out[0] = 1.0;
    out
}

fn flip_odd(v: &mut [f64]) {
    for x in v.iter_mut().skip(1).step_by(2) {
        *x = -*x;
    }
}

/// Sequence at `ax > 0` given accurate `j_0(ax)` and `j_1(ax)`.
fn from_seeds(ax: f64, j0: f64, j1: f64, k_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    out[0] = j0;
    if k_max == 0 {
        return out;
    }
    if ax < 1.0 {
        // j_1 from the closed form loses digits here; sweep all the way down.
        let f = miller(ax, k_max, 0);
        let scale = j0 / f[0];
        for (o, v) in out.iter_mut().zip(&f) {
            *o = v * scale;
        }
        return out;
    }
    out[1] = j1;
    let k_b = k_max.min(ax.floor() as usize);
    for k in 1..k_b {
        out[k + 1] = (2 * k + 1) as f64 / ax * out[k] - out[k - 1];
    }
    if k_max > k_b {
        let lo = k_b - 1;
        let f = miller(ax, k_max, lo);
        let anchor = if out[k_b].abs() >= out[lo].abs() { k_b } else { lo };
        let scale = out[anchor] / f[anchor - lo];
        for k in k_b + 1..=k_max {
            out[k] = f[k - lo] * scale;
        }
    }
    out
}

/// Unnormalized minimal solution of the recurrence on `lo..=k_max`, indexed
/// from `lo`.
fn miller(ax: f64, k_max: usize, lo: usize) -> Vec<f64> {
    let top = (k_max as f64).max(ax);
    let start = top.ceil() as usize + 16 + (1.5 * top.sqrt()).ceil() as usize;
    let mut vals = vec![0.0; k_max + 1 - lo];
    let mut above = 0.0;
    let mut cur = 1.0;
    // Invariant: `cur` holds f_k and `above` holds f_{k+1}.
    let mut k = start;
    loop {
        if k <= k_max && k >= lo {
            vals[k - lo] = cur;
        }
        if k == lo {
            break;
        }
        let below = (2 * k + 1) as f64 / ax * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > RESCALE_AT {
            above /= RESCALE_AT;
            cur /= RESCALE_AT;
            for v in vals.iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_exact() {
        assert_eq!(spherical_bessel_seq(0.0, 3), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(spherical_bessel_at_pi_multiple(0, 2), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn closed_forms_at_pi() {
        let j = spherical_bessel_seq(PI, 2);
        assert!(j[0].abs() <= 1e-15);
        assert!((j[1] - 1.0 / PI).abs() <= 1e-15);
        assert!((j[2] - 3.0 / (PI * PI)).abs() <= 1e-15);
        let e = spherical_bessel_at_pi_multiple(1, 2);
        assert_eq!(e[0], 0.0);
        assert!((e[2] - 3.0 / (PI * PI)).abs() <= 1e-16);
    }

    #[test]
    fn small_argument_series() {
        // j_k(x) ≈ x^k / (2k+1)!! for small x.
        let x = 1e-3;
        let j = spherical_bessel_seq(x, 5);
        let mut df = 1.0;
        for (k, v) in j.iter().enumerate() {
            df *= (2 * k + 1) as f64;
            let approx = x.powi(k as i32) / df * (1.0 - x * x / (2.0 * (2 * k + 3) as f64));
            assert!((v / approx - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn parity_and_pi_multiples_agree() {
        for ell in [-5i64, -1, 1, 2, 9] {
            let a = spherical_bessel_at_pi_multiple(ell, 12);
            let b = spherical_bessel_seq(PI * ell as f64, 12);
            for k in 1..=12 {
                assert!((a[k] - b[k]).abs() <= 1e-12 * b[k].abs().max(1e-3), "ell={ell} k={k}");
            }
        }
    }
}
