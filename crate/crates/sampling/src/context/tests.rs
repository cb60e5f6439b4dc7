use super::*;
use crate::{build_frame_model, draw_samples, leverage_profile, PSpec};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn identity_model(dim: usize) -> FrameModel {
    build_frame_model(CMat::identity(dim), CMat::identity(dim), None).unwrap()
}

/// A draw that visits each of `0..n` exactly `reps` times.
fn covering(prof: &LeverageProfile, n: usize, reps: usize) -> SampleDraw {
    let idx = (0..reps).flat_map(|_| 0..n).collect();
    SampleDraw::from_indices(prof, idx, 0).unwrap()
}

#[test]
fn point_mass_gram_and_cross_term() {
    // s_0 = (cos θ, sin θ), s_1 = e_2 and w = e_1, so v_1 = 0 and the
    // leverage distribution is a point mass at j = 0.
    let th: f64 = 0.3;
    let s = CMat::from_real(2, 2, &[th.cos(), 0.0, th.sin(), 1.0]).unwrap();
    let w = CMat::from_real(2, 1, &[1.0, 0.0]).unwrap();
    let model = build_frame_model(s, w, None).unwrap();
    let prof = leverage_profile(&model, 1, &PSpec::Leverage).unwrap();
    assert_eq!(prof.p, vec![1.0, 0.0]);
    let draw = draw_samples(&prof, 7, 3).unwrap();
    assert!(draw.indices.iter().all(|&i| i == 0));
    let ctx = SamplingContext::new(&model, &prof).unwrap();
    let g = ctx.empirical_gram(&draw).unwrap();
    let v0 = th.cos();
    assert!((g.get(0, 0) - c(v0 * v0)).norm() < 1e-15);
    // Ĉ = v_0 u_0ᴴ with u_0 = (0, sin θ).
    let ch = ctx.empirical_cross_term(&draw).unwrap();
    let expect = CMat::from_real(1, 2, &[0.0, v0 * th.sin()]).unwrap();
    assert!(ch.max_abs_diff(&expect) < 1e-15);
}

#[test]
fn identity_gram_with_even_multiplicities_is_identity() {
    let model = identity_model(8);
    let prof = leverage_profile(&model, 4, &PSpec::Leverage).unwrap();
    let draw = covering(&prof, 4, 5);
    let g = empirical_gram(&prof, &draw).unwrap();
    assert!(g.max_abs_diff(&CMat::identity(4)) < 1e-14);
    // Uneven multiplicities give diag(c_k · n/m).
    let draw = SampleDraw::from_indices(&prof, vec![0, 0, 0, 1, 2, 3], 0).unwrap();
    let g = empirical_gram(&prof, &draw).unwrap();
    let expect = CMat::diag_real(&[3.0 * 4.0 / 6.0, 4.0 / 6.0, 4.0 / 6.0, 4.0 / 6.0]);
    assert!(g.max_abs_diff(&expect) < 1e-14);
}

#[test]
fn identity_gram_concentrates() {
    let model = identity_model(8);
    let prof = leverage_profile(&model, 4, &PSpec::Leverage).unwrap();
    let draw = draw_samples(&prof, 100_000, 11).unwrap();
    let g = empirical_gram(&prof, &draw).unwrap();
    let dev = operator_norm(&g.sub(&CMat::identity(4)).unwrap()).unwrap();
    assert!(dev <= 0.05, "{dev}");
}

#[test]
fn identity_cross_term_vanishes_for_every_draw() {
    let model = identity_model(8);
    let prof = leverage_profile(&model, 4, &PSpec::Custom(vec![1.0; 8])).unwrap();
    for seed in 0..5 {
        let draw = draw_samples(&prof, 30, seed).unwrap();
        let ch = empirical_cross_term(&model, &prof, &draw).unwrap();
        assert_eq!(operator_norm(&ch).unwrap(), 0.0);
    }
}

#[test]
fn exact_interpolation_on_identity_model() {
    let model = identity_model(8);
    let prof = leverage_profile(&model, 4, &PSpec::Leverage).unwrap();
    let draw = covering(&prof, 4, 1);
    let f: Vec<Complex64> = (0..8)
        .map(|i| if i < 4 { Complex64::new(i as f64 + 1.0, -0.5) } else { c(0.0) })
        .collect();
    let rep = reconstruct(&model, &prof, &draw, &f).unwrap();
    assert!(rep.err_l2 <= 1e-10);
    for (x, fk) in rep.x_tilde.iter().zip(&f[..4]) {
        assert!((x - fk).norm() < 1e-12);
    }
    assert!(rep.bound_ok && !rep.used_pseudo_inverse);
    assert_eq!(rep.gram_condition, GramCondition::Finite(1.0));
}

#[test]
fn tail_splits_orthogonally_on_identity_model() {
    let model = identity_model(8);
    let prof = leverage_profile(&model, 4, &PSpec::Leverage).unwrap();
    let draw = SampleDraw::from_indices(&prof, vec![3, 1, 0, 2, 2], 0).unwrap();
    let f: Vec<Complex64> = (0..8).map(|i| Complex64::new(1.0 / (i as f64 + 1.0), 0.1)).collect();
    let rep = reconstruct(&model, &prof, &draw, &f).unwrap();
    let tail = f[4..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!((rep.tail_err - tail).abs() < 1e-12);
    assert!((rep.err_l2 - rep.tail_err).abs() < 1e-10);
    assert_eq!(rep.k_factor, 0.0);
    assert!(rep.bound_ok);
}

#[test]
fn reconstruct_rejects_wrong_length() {
    let model = identity_model(3);
    let prof = leverage_profile(&model, 2, &PSpec::Leverage).unwrap();
    let draw = covering(&prof, 2, 1);
    assert!(matches!(
        reconstruct(&model, &prof, &draw, &[c(1.0); 2]),
        Err(SamplingError::Shape(_))
    ));
}

#[test]
fn draw_from_other_distribution_is_rejected() {
    let model = identity_model(4);
    let a = leverage_profile(&model, 2, &PSpec::Leverage).unwrap();
    let b = leverage_profile(&model, 3, &PSpec::Leverage).unwrap();
    let draw = draw_samples(&a, 5, 1).unwrap();
    assert!(matches!(
        empirical_gram(&b, &draw),
        Err(SamplingError::DrawMismatch(_))
    ));
}

#[test]
fn range_stability_examples() {
    let model = identity_model(5);
    let prof = leverage_profile(&model, 3, &PSpec::Leverage).unwrap();
    let draw = draw_samples(&prof, 20_000, 5).unwrap();
    assert!(range_stability_check(&prof, &draw).unwrap().equal);

    let one = leverage_profile(&model, 1, &PSpec::Leverage).unwrap();
    assert_eq!(one.p[0], 1.0);
    let draw = draw_samples(&one, 3, 9).unwrap();
    let rc = range_stability_check(&one, &draw).unwrap();
    assert!(rc.equal && rc.distance < 1e-12);

    // Reconstruction frame [a1, a2, a1, a2]: Σ has rank 2; a draw that only
    // sees one sampling direction cannot recover Ran(Σ).
    let w = CMat::from_real(
        3,
        4,
        &[1.0, 0.0, 1.0, 0.0, 0.5, 1.0, 0.5, 1.0, 0.0, 2.0, 0.0, 2.0],
    )
    .unwrap();
    let model = build_frame_model(CMat::identity(3), w, None).unwrap();
    let prof = leverage_profile(&model, 4, &PSpec::Leverage).unwrap();
    assert_eq!(prof.sigma_rank, 2);
    let draw = SampleDraw::from_indices(&prof, vec![0, 0, 0], 0).unwrap();
    let rc = range_stability_check(&prof, &draw).unwrap();
    assert!(!rc.equal && (rc.distance - 1.0).abs() < 1e-9);
}
