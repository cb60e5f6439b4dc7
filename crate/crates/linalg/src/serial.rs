//! Number formatting shared by every JSON and CSV writer.
//!
//! Reals are written with 17 significant digits so that they round-trip
//! exactly; complex numbers are written as `[re, im]`.


use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Formats a finite real with 17 significant digits (`1.2345678901234567e-3`).
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // Normalize -0.0 so that outputs do not depend on the sign of zero.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// Serializes a real as a JSON number with 17 significant digits, or `null`
/// if it is not finite.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let raw = serde_json::value::RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

pub fn ser_vec_f64<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| F17(x)))
}

pub fn ser_cvec<S: Serializer>(xs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&z| Cplx(z)))
}

pub fn de_cvec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
    let v: Vec<Cplx> = Vec::deserialize(d)?;
    Ok(v.into_iter().map(|c| c.0).collect())
}

/// A real that serializes with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_f64(&self.0, s)
    }
}

/// A complex number serialized as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [F17(self.0.re), F17(self.0.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Cplx(Complex64::new(re, im)))
    }
}
