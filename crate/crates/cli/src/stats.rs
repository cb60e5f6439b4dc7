use serde::Serialize;
use sgs_linalg::serial::ser_f64;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// An empirical frequency with its Wilson 95% score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub count: usize,
    pub trials: usize,
    #[serde(serialize_with = "ser_f64")]
    pub freq: f64,
    #[serde(serialize_with = "ser_f64")]
    pub wilson_lo: f64,
    #[serde(serialize_with = "ser_f64")]
    pub wilson_hi: f64,
}

impl Proportion {
    pub fn new(count: usize, trials: usize) -> Self {
        assert!(trials > 0 && count <= trials);
        let t = trials as f64;
        let p = count as f64 / t;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / t;
        let center = (p + z2 / (2.0 * t)) / denom;
        let half = Z95 * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
        Proportion {
            count,
            trials,
            freq: p,
            wilson_lo: if count == 0 { 0.0 } else { (center - half).max(0.0) },
            wilson_hi: if count == trials { 1.0 } else { (center + half).min(1.0) },
        }
    }

    pub fn of<T>(items: &[T], pred: impl Fn(&T) -> bool) -> Self {
        Proportion::new(items.iter().filter(|x| pred(x)).count(), items.len())
    }
}

/// Median; the mean of the two middle values for even lengths. NaN for an
/// empty slice.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
