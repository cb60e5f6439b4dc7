use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use proptest::prelude::*;
use sgs_fourier_legendre::quad::gauss_legendre;
use sgs_fourier_legendre::*;
use sgs_linalg::{operator_norm, CMat, Complex64};

#[test]
fn model_leverage_matches_closed_form_distribution() {
    for (n, j, ambient) in [(1, 11, 21), (5, 401, 801), (10, 2001, 2001)] {
        let fl = build_fl_model(n, j, ambient).unwrap();
        let prof = fl.leverage_profile(n).unwrap();
        let scores = fl_leverage_scores(n, j);
        for (pos, s) in scores.iter().enumerate() {
            assert!((prof.leverage(pos) - s).abs() <= 1e-9, "n={n} pos={pos}");
        }
        let (p, trunc) = fl_leverage_distribution(n, j).unwrap();
        for (a, b) in p.iter().zip(&prof.p) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!((trunc.tail_mass - prof.tail_mass).abs() <= 1e-12);
        assert!(trunc.tail_mass >= -1e-12);
    }
}

#[test]
fn zero_frequency_leverage_is_one() {
    let (p, t) = fl_leverage_distribution(5, 401).unwrap();
    assert!((5.0 * p[0] * (1.0 - t.tail_mass) - 1.0).abs() <= 1e-12);
    assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
}

#[test]
fn truncated_gram_is_within_the_reported_defects() {
    let fl = build_fl_model(5, 2001, 2001).unwrap();
    let prof = fl.leverage_profile(5).unwrap();
    let dev = operator_norm(&prof.sigma.sub(&CMat::identity(5)).unwrap()).unwrap();
    let total: f64 = fl.column_defects.iter().sum();
    assert!(dev <= total + 1e-12, "{dev} vs {total}");
    assert!(fl.model.flags().sampling_is_orthonormal);
}

#[test]
fn wide_band_reaches_small_defects() {
    // Without building a model: the first five columns over 4,000,001
    // frequencies have defects below 1e-6 and an identity Gram to 1e-5.
    let n = 5;
    let ambient = 4_000_001;
    let mut gram = DMatrix::<Complex64>::zeros(n, n);
    for pos in 0..ambient {
        let col = legendre_fourier_column(frequency_at(pos), n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] += col[a].conj() * col[b];
            }
        }
    }
    for k in 0..n {
        assert!(1.0 - gram[(k, k)].re < 1e-6, "k={k}");
    }
    let dev = operator_norm(&CMat::from_dmatrix(gram - DMatrix::identity(n, n)).unwrap()).unwrap();
    assert!(dev < 1e-5);
}

#[test]
fn tail_mass_helper_reaches_default_target() {
    let t = fl_truncation_for_tail(20, DEFAULT_MAX_TAIL).unwrap();
    assert!(t.tail_mass < DEFAULT_MAX_TAIL);
    let (_, check) = fl_leverage_distribution(20, t.j).unwrap();
    assert_eq!(check.tail_mass, t.tail_mass);
}

#[test]
fn quadrature_agrees_with_closed_form_legendre_coefficients_for_pole() {
    let t = AnalyticTarget::pole(1.5).unwrap();
    let closed = t.legendre_coef_closed(40).unwrap();
    for (k, want) in closed.iter().enumerate() {
        let got = t.legendre_coef(k).unwrap();
        assert!(got.im == 0.0);
        assert!((got.re - want).abs() <= 1e-13, "k={k}: {} vs {want}", got.re);
    }
}

#[test]
fn exp_fourier_closed_form_matches_quadrature() {
    for c in [0.0, 1.0, -2.0, 3.5] {
        let t = AnalyticTarget::exp(c).unwrap();
        for ell in [-50i64, -3, 0, 1, 2, 9, 300] {
            let a = t.fourier_coef(ell).unwrap();
            let b = t.fourier_coef_quadrature(ell).unwrap();
            assert!((a - b).norm() <= 1e-10, "c={c} ell={ell}");
        }
    }
}

#[test]
fn parseval_audit() {
    for t in [AnalyticTarget::exp(1.0).unwrap(), AnalyticTarget::exp(2.0).unwrap(), AnalyticTarget::pole(1.5).unwrap()] {
        let quad_norm = gauss_legendre(512).integrate(|x| t.eval(x).powi(2));
        assert!((quad_norm - t.norm_sq()).abs() <= 1e-12);
        let mut prev_tail = f64::INFINITY;
        for j in [21, 201, 1001] {
            let tc = target_coefficients(&t, 8, j).unwrap();
            let retained: f64 = tc.fourier.iter().map(|z| z.norm_sqr()).sum();
            assert!(retained <= quad_norm + 1e-12);
            assert!(((quad_norm - retained) - tc.fourier_tail).abs() <= 1e-6);
            assert!(tc.fourier_tail <= prev_tail);
            prev_tail = tc.fourier_tail;
            let leg: f64 = tc.legendre.iter().map(|z| z.norm_sqr()).sum();
            assert!((leg - t.norm_sq()).abs() <= 1e-12, "Legendre Parseval");
        }
    }
}

#[test]
fn pole_tail_decays_at_the_ellipse_rate() {
    let t = AnalyticTarget::pole(1.5).unwrap();
    let tc = target_coefficients(&t, 30, 1).unwrap();
    let tail = |n: usize| tc.legendre[n..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let inv_rho = 1.0 / t.rho();
    for n in 8..=20 {
        let ratio = tail(n + 1) / tail(n);
        assert!((ratio - inv_rho).abs() <= 0.05, "n={n}: {ratio} vs {inv_rho}");
    }
    // Fitted coefficient ratio over k in [10, 20].
    let fit = (tc.legendre[20].norm() / tc.legendre[10].norm()).powf(0.1);
    assert!((fit - inv_rho).abs() <= 0.05 * inv_rho);
}

#[test]
fn exp_target_legendre_error_is_tiny_at_twelve_terms() {
    let t = AnalyticTarget::exp(2.0).unwrap();
    let tc = target_coefficients(&t, 12, 1).unwrap();
    let err = tc.legendre_error(&tc.legendre[..12]);
    assert!(err < 1e-8, "{err}");
    assert_eq!(tc.legendre_error(&tc.legendre), 0.0);
}

#[test]
fn l2_error_matches_quadrature_of_synthesized_functions() {
    // Functions given by a few Fourier coordinates in the ambient basis.
    let ambient = 9;
    let f: Vec<Complex64> = (0..ambient).map(|i| Complex64::new((i as f64).cos(), 0.3 * i as f64)).collect();
    let g: Vec<Complex64> = (0..ambient).map(|i| Complex64::new(0.5 * (i as f64).sin(), -0.1)).collect();
    let eval = |c: &[Complex64], x: f64| -> Complex64 {
        c.iter()
            .enumerate()
            .map(|(pos, z)| {
                let w = std::f64::consts::PI * frequency_at(pos) as f64;
                z * Complex64::new(0.0, w * x).exp() * FRAC_1_SQRT_2
            })
            .sum()
    };
    let quad = gauss_legendre(200).integrate(|x| (eval(&f, x) - eval(&g, x)).norm_sqr()).sqrt();
    let direct = l2_error(&f, &g).unwrap();
    assert!((quad - direct).abs() <= 1e-8, "{quad} vs {direct}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tail_mass_shrinks_with_band(n in 1usize..15, half in 20usize..200) {
        let (_, a) = fl_leverage_distribution(n, 2 * half + 1).unwrap();
        let (_, b) = fl_leverage_distribution(n, 2 * half + 3).unwrap();
        prop_assert!(b.tail_mass <= a.tail_mass + 1e-15);
        prop_assert!(a.tail_mass >= -1e-12);
    }
}
