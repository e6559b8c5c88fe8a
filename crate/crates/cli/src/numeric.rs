//! Exact number parsing and formatting for the file formats.
//!
//! Instance files carry rationals as JSON integers or strings. Strings may be
//! plain integers (`"42"`), decimals (`"0.25"`), or fractions (`"3/7"`).
//! Floating point literals are rejected outright: a `f64` has already lost
//! the exactness the formats promise.
//!
//! Canonical output is an integer token when the value is integral (a JSON
//! number when it fits in `i64`, a plain digit string otherwise) and `"p/q"`
//! for everything else.

use core::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use pfle_core::Rational;
use serde::de::Visitor;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("empty number literal")]
    Empty,
    #[error("malformed number literal {literal:?}")]
    BadLiteral { literal: String },
    #[error("zero denominator in {literal:?}")]
    ZeroDenominator { literal: String },
}

fn bad(literal: &str) -> NumberError {
    NumberError::BadLiteral {
        literal: literal.into(),
    }
}

/// Parses an exact rational from integer, decimal, or `p/q` text.
pub fn parse_exact(text: &str) -> Result<Rational, NumberError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(NumberError::Empty);
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad(text))?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad(text))?;
        if den.is_zero() {
            return Err(NumberError::ZeroDenominator {
                literal: text.into(),
            });
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = trimmed.split_once('.') {
        if int_part.is_empty()
            || frac_part.is_empty()
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad(text));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::from_str(&digits).map_err(|_| bad(text))?;
        let denom = BigInt::from(10u32).pow(frac_part.len());
        return Ok(Rational::new(numer, denom));
    }
    let value = BigInt::from_str(trimmed).map_err(|_| bad(text))?;
    Ok(Rational::from_integer(value))
}

/// Canonical text: integers bare, everything else as `p/q`.
pub fn format_exact(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Always-fractional rendering for ratio columns, e.g. `3/1`.
pub fn ratio_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Serde bridge: a rational stored as a JSON integer or canonical string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactNumber(pub Rational);

impl From<Rational> for ExactNumber {
    fn from(value: Rational) -> Self {
        ExactNumber(value)
    }
}

impl ExactNumber {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(small) = i64::try_from(self.0.numer().clone()) {
                return serializer.serialize_i64(small);
            }
        }
        serializer.serialize_str(&format_exact(&self.0))
    }
}

struct ExactVisitor;

impl Visitor<'_> for ExactVisitor {
    type Value = ExactNumber;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or an exact number string like \"3/7\" or \"0.25\"")
    }

    fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Self::Value, E> {
        Ok(ExactNumber(Rational::from_integer(BigInt::from(v))))
    }

    fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Self::Value, E> {
        Ok(ExactNumber(Rational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Self::Value, E> {
        Err(E::custom(format!(
            "floating point literal {v} is not exact; write an integer or a string like \"1/3\" or \"0.5\""
        )))
    }

    fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
        parse_exact(v).map(ExactNumber).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExactVisitor)
    }
}
