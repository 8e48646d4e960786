//! Exact rational scalars and their text forms.
//!
//! Coefficients, weights and evaluation points are all `BigRational`. The
//! text form used in every JSON schema is `"p/q"` (integers print bare), and
//! the parser additionally accepts plain decimal literals such as `-1.05`,
//! which are converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `p/q` or a decimal literal like `-0.95` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| malformed())?;
        let den: BigInt = den.trim().parse().map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(RationalParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if frac.is_empty() && whole.is_empty() {
            return Err(malformed());
        }
        let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if !all_digits(whole) || !all_digits(frac) {
            return Err(malformed());
        }
        let digits = format!("{whole}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| malformed())?
        };
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| malformed())?;
    Ok(Rational::from_integer(num))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rounds a finite float to the nearest multiple of `2^-32`.
pub fn rationalize(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let scale = (1u64 << 32) as f64;
    let scaled = (x * scale).round();
    if scaled.abs() >= 1.0e36 {
        return None;
    }
    let num = BigInt::from(scaled as i128);
    Some(Rational::new(num, BigInt::from(1u64 << 32)))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde adapter: a single rational as a `"p/q"` string.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter: a list of rationals as `"p/q"` strings.
pub mod serde_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("6/5").unwrap(), ratio(6, 5));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("1.05").unwrap(), ratio(21, 20));
        assert_eq!(parse_rational("-0.9").unwrap(), ratio(-9, 10));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_rational(""), Err(RationalParseError::Empty)));
        assert!(matches!(
            parse_rational("1/0"),
            Err(RationalParseError::ZeroDenominator(_))
        ));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e5").is_err());
    }

    #[test]
    fn rationalize_rounds_to_dyadic_grid() {
        let r = rationalize(0.5).unwrap();
        assert_eq!(r, ratio(1, 2));
        let r = rationalize(1.0 / 3.0).unwrap();
        assert!(r.denom() <= &BigInt::from(1u64 << 32));
        assert!((to_f64(&r) - 1.0 / 3.0).abs() < 1e-9);
        assert!(rationalize(f64::NAN).is_none());
    }
}
