use std::f64::consts::{PI, SQRT_2};

use sgs_linalg::Complex64;

use crate::freq::frequency_at;
use crate::legendre::legendre_eval;
use crate::quad::integrate_adaptive;
use crate::{FlError, Result};

/// Highest Legendre degree [`target_coefficients`] will compute while
/// waiting for the coefficients to become negligible.
pub const MAX_LEGENDRE_DEGREE: usize = 2000;

/// Coefficients below `LEGENDRE_FLOOR · ‖f‖` (two in a row) end the Legendre
/// expansion. Quadrature round-off sits just below this level.
pub const LEGENDRE_FLOOR: f64 = 1e-15;

/// Test functions on `[−1, 1]` with known analyticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticTarget {
    /// `f(x) = e^{cx}`, entire.
    ExpC { c: f64 },
    /// `f(x) = 1/(x − a)` with `a > 1`; analytic inside the Bernstein
    /// ellipse through the pole.
    PoleA { a: f64 },
}

impl AnalyticTarget {
    pub fn exp(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(FlError::InvalidArgument(format!("exp_c needs a finite c, got {c}")));
        }
        Ok(AnalyticTarget::ExpC { c })
    }

    pub fn pole(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 1.0) {
            return Err(FlError::InvalidArgument(format!("pole_a needs finite a > 1, got {a}")));
        }
        Ok(AnalyticTarget::PoleA { a })
    }

    /// Bernstein-ellipse parameter; infinite for entire targets.
    pub fn rho(&self) -> f64 {
        match *self {
            AnalyticTarget::ExpC { .. } => f64::INFINITY,
            AnalyticTarget::PoleA { a } => a + (a * a - 1.0).sqrt(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            AnalyticTarget::ExpC { c } => (c * x).exp(),
            AnalyticTarget::PoleA { a } => 1.0 / (x - a),
        }
    }

    /// `‖f‖²` on `[−1, 1]` in closed form.
    pub fn norm_sq(&self) -> f64 {
        match *self {
            AnalyticTarget::ExpC { c: 0.0 } => 2.0,
            AnalyticTarget::ExpC { c } => (2.0 * c).sinh() / c,
            AnalyticTarget::PoleA { a } => 2.0 / (a * a - 1.0),
        }
    }

    /// `f̂(ℓ) = (1/√2)∫ f(x) e^{−iπℓx} dx`. Closed form for `exp_c`,
    /// quadrature for `pole_a`.
    pub fn fourier_coef(&self, ell: i64) -> Result<Complex64> {
        match *self {
            AnalyticTarget::ExpC { c } => Ok(exp_fourier_closed(c, ell)),
            AnalyticTarget::PoleA { .. } => self.fourier_coef_quadrature(ell),
        }
    }

    /// Quadrature oracle for `f̂(ℓ)`.
    pub fn fourier_coef_quadrature(&self, ell: i64) -> Result<Complex64> {
        let w = PI * ell as f64;
        let v = integrate_adaptive(
            |x| Complex64::new(0.0, -w * x).exp() * self.eval(x),
            (0.6 * w.abs()) as usize,
        )?;
        Ok(v / SQRT_2)
    }

    /// `⟨f, w_{k+1}⟩` against the normalized Legendre polynomial of degree
    /// `k`, by quadrature.
    pub fn legendre_coef(&self, k: usize) -> Result<Complex64> {
        integrate_adaptive(|x| Complex64::new(self.eval(x) * legendre_eval(k, x)[k], 0.0), k + 1)
    }

    /// Closed-form Legendre coefficient where one is implemented:
    /// `−2√(k+½)·Q_k(a)` for `pole_a`.
    pub fn legendre_coef_closed(&self, k_max: usize) -> Option<Vec<f64>> {
        match *self {
            AnalyticTarget::ExpC { .. } => None,
            AnalyticTarget::PoleA { a } => Some(
                legendre_q(a, k_max)
                    .iter()
                    .enumerate()
                    .map(|(k, q)| -2.0 * (k as f64 + 0.5).sqrt() * q)
                    .collect(),
            ),
        }
    }
}

/// `√2·sinh(z)/z` with `z = c − iπℓ`. Since `sin(πℓ) = 0`,
/// `sinh(z) = (−1)^ℓ sinh(c)` exactly.
fn exp_fourier_closed(c: f64, ell: i64) -> Complex64 {
    if ell == 0 {
        return Complex64::new(if c == 0.0 { SQRT_2 } else { SQRT_2 * c.sinh() / c }, 0.0);
    }
    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
    let z = Complex64::new(c, -PI * ell as f64);
    Complex64::new(SQRT_2 * sign * c.sinh(), 0.0) / z
}

/// Legendre functions of the second kind `Q_0(a), …, Q_{k_max}(a)` for
/// `a > 1`, by downward (Miller) recurrence normalized to
/// `Q_0 = ½ ln((a+1)/(a−1))`.
pub fn legendre_q(a: f64, k_max: usize) -> Vec<f64> {
    assert!(a > 1.0, "legendre_q needs a > 1");
    let rho = a + (a * a - 1.0).sqrt();
    let extra = (40.0 / rho.ln()).ceil() as usize + 16;
    let start = k_max + extra;
    let mut vals = vec![0.0; k_max + 1];
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut k = start;
    loop {
        if k <= k_max {
            vals[k] = cur;
        }
        if k == 0 {
            break;
        }
        let kf = k as f64;
        let below = ((2.0 * kf + 1.0) * a * cur - (kf + 1.0) * above) / kf;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > 1e250 {
            above /= 1e250;
            cur /= 1e250;
            vals.iter_mut().for_each(|v| *v /= 1e250);
        }
    }
    let q0 = 0.5 * ((a + 1.0) / (a - 1.0)).ln();
    let scale = q0 / vals[0];
    vals.iter_mut().for_each(|v| *v *= scale);
    vals
}

/// Coefficient tables of a target.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetCoefficients {
    /// `⟨f, w_{k+1}⟩` for `k = 0..len`; extends past the requested `n`
    /// until the coefficients are negligible.
    pub legendre: Vec<Complex64>,
    /// `f̂(σ(i))` for the first `J` frequency positions.
    pub fourier: Vec<Complex64>,
    /// `‖f‖²` in closed form.
    pub norm_sq: f64,
    /// `‖f‖² − Σ_retained |f̂|²`, the energy outside the retained band.
    pub fourier_tail: f64,
}

impl TargetCoefficients {
    /// `‖f − Σ_k x_k w_{k+1}‖` in `L²([−1, 1])` from Legendre coordinates.
    pub fn legendre_error(&self, x: &[Complex64]) -> f64 {
        let mut s = 0.0;
        for (k, a) in self.legendre.iter().enumerate() {
            let d = match x.get(k) {
                Some(v) => a - v,
                None => *a,
            };
            s += d.norm_sqr();
        }
        for v in x.iter().skip(self.legendre.len()) {
            s += v.norm_sqr();
        }
        s.sqrt()
    }
}

/// Legendre coefficients up to at least degree `n − 1` and Fourier
/// coefficients at the first `J` frequency positions.
pub fn target_coefficients(target: &AnalyticTarget, n: usize, j: usize) -> Result<TargetCoefficients> {
    let norm_sq = target.norm_sq();
    let floor = LEGENDRE_FLOOR * norm_sq.sqrt();
    let mut legendre = Vec::new();
    let mut small_run = 0;
    for k in 0..=MAX_LEGENDRE_DEGREE {
        let a = target.legendre_coef(k)?;
        small_run = if a.norm() <= floor { small_run + 1 } else { 0 };
        legendre.push(a);
        if k + 1 >= n && small_run >= 2 {
            break;
        }
    }
    if small_run < 2 {
        return Err(FlError::Quadrature {
            nodes: MAX_LEGENDRE_DEGREE,
            disagreement: legendre.last().map_or(0.0, |a| a.norm()),
        });
    }
    let fourier = (0..j)
        .map(|pos| target.fourier_coef(frequency_at(pos)))
        .collect::<Result<Vec<_>>>()?;
    let retained: f64 = fourier.iter().map(|z| z.norm_sqr()).sum();
    Ok(TargetCoefficients {
        legendre,
        fourier,
        norm_sq,
        fourier_tail: norm_sq - retained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_target() {
        let t = AnalyticTarget::exp(0.0).unwrap();
        assert_eq!(t.fourier_coef(0).unwrap(), Complex64::new(SQRT_2, 0.0));
        for ell in [1, -1, 2, 17] {
            assert_eq!(t.fourier_coef(ell).unwrap().norm(), 0.0);
        }
        let tc = target_coefficients(&t, 3, 5).unwrap();
        assert!((tc.legendre[0].re - SQRT_2).abs() < 1e-14);
        assert!(tc.legendre[1..].iter().all(|a| a.norm() < 1e-14));
        assert_eq!(t.rho(), f64::INFINITY);
    }

    #[test]
    fn exp_closed_form_value() {
        let t = AnalyticTarget::exp(1.0).unwrap();
        let v = t.fourier_coef(0).unwrap();
        assert!((v.re - SQRT_2 * 1f64.sinh()).abs() < 1e-15);
        assert!((v.re - 1.6620).abs() < 1e-4);
    }

    #[test]
    fn pole_parameters() {
        let t = AnalyticTarget::pole(1.5).unwrap();
        assert!((t.rho() - 2.618_033_988_749_895).abs() < 1e-15);
        assert!(AnalyticTarget::pole(1.0).is_err());
        assert!(AnalyticTarget::exp(f64::NAN).is_err());
    }

    #[test]
    fn q_functions_match_closed_forms() {
        let a: f64 = 1.5;
        let q = legendre_q(a, 3);
        let q0 = 0.5 * ((a + 1.0) / (a - 1.0)).ln();
        assert!((q[0] - q0).abs() < 1e-15);
        assert!((q[1] - (a * q0 - 1.0)).abs() < 1e-14);
        let q2 = 0.5 * (3.0 * a * a - 1.0) * q0 - 1.5 * a;
        assert!((q[2] - q2).abs() < 1e-13);
    }
}
