//! Exact rational helpers for calibration distances and budget ratios.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

pub use num_rational::Rational64 as Ratio;

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serializes a rational as `"p/q"` (or `"p"` when integral).
pub fn serialize_ratio<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    r.to_string().serialize(s)
}
