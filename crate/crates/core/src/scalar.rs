//! Exact rational scalars, Pochhammer kernels and the float log-gamma path.
//!
//! Every exact computation in the crate runs on [`ExactScalar`], an
//! arbitrary-precision rational that is kept in lowest terms after each
//! operation. Floats only appear when weights are normalized.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{RacahError, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

/// `p/q` as an exact scalar.
pub fn rat(p: i64, q: i64) -> ExactScalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(p))
}

/// Rising factorial `a (a+1) ... (a+m-1)`; the empty product is 1.
pub fn pochhammer(a: &ExactScalar, m: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut factor = a.clone();
    for _ in 0..m {
        acc *= &factor;
        factor += BigInt::one();
    }
    acc
}

pub fn factorial(m: u32) -> ExactScalar {
    pochhammer(&ExactScalar::one(), m)
}

/// Parses the literal format `p/q` (or `p`), with optional sign and whitespace.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let trimmed = text.trim();
    let parsed = BigRational::from_str(trimmed)
        .map_err(|e| RacahError::Parse(format!("invalid rational literal {trimmed:?}: {e}")))?;
    Ok(parsed)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_scalar(value: &ExactScalar) -> String {
    value.to_string()
}

/// Lossy conversion to double precision.
pub fn to_f64(value: &ExactScalar) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

fn ln_abs_bigint(value: &BigInt) -> f64 {
    let bits = value.bits();
    if bits <= 64 {
        return value.abs().to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top: BigInt = value.abs() >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |q|` without overflowing for rationals with thousands of digits.
pub fn ln_abs(value: &ExactScalar) -> Result<f64> {
    if value.is_zero() {
        return Err(RacahError::Domain("logarithm of zero".into()));
    }
    Ok(ln_abs_bigint(value.numer()) - ln_abs_bigint(value.denom()))
}

/// Natural logarithm of the Gamma function for positive real arguments.
pub fn log_gamma_float(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || a.is_infinite() {
        return Err(RacahError::Domain(format!("log-gamma needs a positive argument, got {a}")));
    }
    Ok(statrs::function::gamma::ln_gamma(a))
}

/// Argument of a Gamma factor that is kept symbolic.
///
/// Bases are never nonpositive integers. Weight formulas normalize every
/// Gamma argument to its fractional part, so in practice bases lie in (0, 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaBase(ExactScalar);

impl GammaBase {
    pub fn new(value: ExactScalar) -> Result<Self> {
        if value.is_integer() && !value.is_positive() {
            return Err(RacahError::Pole(format!("Gamma({value})")));
        }
        Ok(GammaBase(value))
    }

    pub fn value(&self) -> &ExactScalar {
        &self.0
    }
}

impl fmt::Display for GammaBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gamma({})", self.0)
    }
}

impl Serialize for GammaBase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_scalar(&self.0))
    }
}

/// Serde adapter that writes scalars as `"p/q"` strings.
pub mod serde_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &ExactScalar,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_scalar(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<ExactScalar, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for vectors of `"p/q"` strings.
pub mod serde_scalar_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        values: &[ExactScalar],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(format_scalar).collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<ExactScalar>, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        strings
            .iter()
            .map(|s| parse_scalar(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
