use std::f64::consts::{PI, SQRT_2};

use proptest::prelude::*;
use sgs_fourier_legendre::quad::{gauss_legendre, integrate_adaptive};
use sgs_fourier_legendre::*;
use sgs_linalg::Complex64;

/// Reference values computed with mpmath at 60 digits. `double` rows are
/// evaluated at the exact IEEE value of `arg`; `pi_multiple` rows at `arg·π`.
const REFERENCE: &str = include_str!("data/spherical_bessel.csv");

struct Row {
    kind: String,
    arg: f64,
    k: usize,
    value: f64,
}

fn reference_rows() -> Vec<Row> {
    REFERENCE
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            Row {
                kind: f[0].to_string(),
                arg: f[1].parse().unwrap(),
                k: f[2].parse().unwrap(),
                value: f[3].parse().unwrap(),
            }
        })
        .collect()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs() + 1e-40
}

#[test]
fn bessel_matches_high_precision_reference() {
    let rows = reference_rows();
    assert!(rows.len() > 500);
    for r in &rows {
        let got = match r.kind.as_str() {
            "double" => spherical_bessel_seq(r.arg, 40)[r.k],
            "pi_multiple" => spherical_bessel_at_pi_multiple(r.arg as i64, 40)[r.k],
            other => panic!("unknown row kind {other}"),
        };
        assert!(close(got, r.value, 1e-10), "{} {} k={}: {got} vs {}", r.kind, r.arg, r.k, r.value);
    }
}

#[test]
fn bessel_closed_forms_at_pi() {
    let j = spherical_bessel_seq(PI, 2);
    assert!(j[0].abs() <= 1e-15);
    // j_1(π) = 1/π and j_2(π) = 3/π².
    assert!((j[1] - 1.0 / PI).abs() < 1e-15);
    assert!((j[2] - 3.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn bessel_recurrence_residual_on_reference_arguments() {
    for x in [PI, 2.0 * PI, 10.5, 0.5, 37.7, -3.25, 200.0] {
        let j = spherical_bessel_seq(x, 60);
        for k in 1..60 {
            let lhs = j[k - 1] + j[k + 1];
            let rhs = (2 * k + 1) as f64 / x * j[k];
            let scale = j[k - 1].abs().max(j[k + 1].abs()).max(rhs.abs());
            assert!((lhs - rhs).abs() <= 1e-10 * scale, "x={x} k={k}");
        }
    }
}

#[test]
fn fourier_coefficients_match_quadrature() {
    for ell in [-40i64, -7, -2, -1, 0, 1, 3, 12, 100, 400] {
        let closed = legendre_fourier_column(ell, 21);
        for (k, want) in closed.iter().enumerate() {
            let w = PI * ell as f64;
            let quad = integrate_adaptive(
                |x| Complex64::new(0.0, -w * x).exp() * legendre_eval(k, x)[k],
                k + (0.6 * w.abs()) as usize,
            )
            .unwrap()
                / SQRT_2;
            assert!((quad - want).norm() <= 1e-10, "ell={ell} k={k}: {quad} vs {want}");
        }
    }
}

#[test]
fn legendre_orthonormal_under_64_point_rule() {
    let rule = gauss_legendre(64);
    let vals: Vec<Vec<f64>> = rule.nodes().iter().map(|&x| legendre_eval(7, x)).collect();
    for a in 0..8 {
        for b in 0..8 {
            let ip: f64 = vals.iter().zip(rule.weights()).map(|(v, w)| w * v[a] * v[b]).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((ip - want).abs() <= 1e-12, "({a},{b}) {ip}");
        }
    }
}

proptest! {
    #[test]
    fn bessel_recurrence_residual(x in prop_oneof![-300.0f64..300.0, -2.0f64..2.0], k_max in 2usize..80) {
        prop_assume!(x != 0.0);
        let j = spherical_bessel_seq(x, k_max);
        for k in 1..k_max {
            let lhs = j[k - 1] + j[k + 1];
            let rhs = (2 * k + 1) as f64 / x * j[k];
            let scale = j[k - 1].abs().max(j[k + 1].abs()).max(rhs.abs());
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "k={}", k);
        }
    }

    #[test]
    fn bessel_parity(x in 0.01f64..100.0, k_max in 0usize..40) {
        let a = spherical_bessel_seq(x, k_max);
        let b = spherical_bessel_seq(-x, k_max);
        for k in 0..=k_max {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(b[k], s * a[k]);
        }
    }

    #[test]
    fn coefficient_parity(ell in 1i64..2000, n in 1usize..40) {
        let a = legendre_fourier_column(ell, n);
        let b = legendre_fourier_column(-ell, n);
        for k in 0..n {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((b[k] - a[k] * s).norm() <= 1e-12);
        }
    }
}
