use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use sgs_linalg::Complex64;

use crate::{FlError, Result};

/// Smallest rule used by [`integrate_adaptive`].
pub const MIN_NODES: usize = 16;
/// Largest rule used by [`integrate_adaptive`].
pub const MAX_NODES: usize = 4096;
/// Successive rules agreeing this closely (relative to `max(1, |I|)`) stop
/// the doubling.
pub const AGREEMENT: f64 = 1e-11;
/// Disagreement still accepted when the node cap is reached.
pub const CAP_ACCEPT: f64 = 1e-9;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n ≥ 1` nodes. Nodes are Newton-refined roots of `P_n`,
    /// returned in increasing order.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..12 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 4e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Shared rule with `n` nodes; rules are built once per process.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(GaussLegendre::new(n));
    Arc::clone(cache.lock().unwrap().entry(n).or_insert(rule))
}

/// Integral over `[−1, 1]` by Gauss–Legendre node doubling, starting from
/// the smallest power of two `≥ max(min_nodes, MIN_NODES)`.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(f: F, min_nodes: usize) -> Result<Complex64> {
    let mut n = min_nodes.max(MIN_NODES).next_power_of_two().min(MAX_NODES / 2);
    let mut prev = gauss_legendre(n).integrate_complex(&f);
    loop {
        n *= 2;
        let cur = gauss_legendre(n).integrate_complex(&f);
        let diff = (cur - prev).norm();
        let scale = cur.norm().max(1.0);
        if diff <= AGREEMENT * scale {
            return Ok(cur);
        }
        if n >= MAX_NODES {
            if diff <= CAP_ACCEPT * scale {
                return Ok(cur);
            }
            return Err(FlError::Quadrature { nodes: n, disagreement: diff });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules_match_tables() {
        let r = GaussLegendre::new(2);
        assert!((r.nodes()[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        let r = GaussLegendre::new(3);
        assert!((r.nodes()[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.nodes()[1], 0.0);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_two_and_degree_is_exact() {
        for n in [1, 5, 16, 64, 4096] {
            let r = gauss_legendre(n);
            assert!((r.weights().iter().sum::<f64>() - 2.0).abs() < 1e-12, "n={n}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
        let r = GaussLegendre::new(6);
        // Exact through degree 11.
        let v = r.integrate(|x| x.powi(10));
        assert!((v - 2.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_integrates_oscillatory_exponential() {
        let w = 300.0;
        let v = integrate_adaptive(|x| Complex64::new(0.0, -w * x).exp(), 16).unwrap();
        assert!((v.re - 2.0 * w.sin() / w).abs() < 1e-13);
        assert!(v.im.abs() < 1e-13);
    }
}
