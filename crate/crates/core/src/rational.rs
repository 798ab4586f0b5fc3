//! Exact rational scalars: parsing, formatting, and serde helpers.
//!
//! Rationals appear in JSON as strings, either integers (`"-3"`), fractions
//! (`"5/2"`), or finite decimals (`"0.25"`). They serialize back as `"p"` or
//! `"p/q"` in lowest terms.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parse `"p"`, `"p/q"`, or a finite decimal such as `"0.49"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let d: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| invalid())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| invalid())?;
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let magnitude = int_part.abs() * &denom + frac_num;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, denom));
    }
    let n: BigInt = s.parse().map_err(|_| invalid())?;
    Ok(Rational::from_integer(n))
}

/// Render in lowest terms as `"p"` or `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: rationals as strings. Use with
/// `#[serde(with = "crate::rational::serde_string")]`.
pub mod serde_string {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_string_vec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(qs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("5").unwrap(), Rational::from_integer(5.into()));
        assert_eq!(
            parse_rational("-3").unwrap(),
            Rational::from_integer((-3).into())
        );
        assert_eq!(
            parse_rational("5/2").unwrap(),
            Rational::new(5.into(), 2.into())
        );
        assert_eq!(
            parse_rational("-6/4").unwrap(),
            Rational::new((-3).into(), 2.into())
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            Rational::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("-0.5").unwrap(),
            Rational::new((-1).into(), 2.into())
        );
        assert_eq!(
            parse_rational(".5").unwrap(),
            Rational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("0x10").is_err());
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("-10/4").unwrap()), "-5/2");
        assert_eq!(format_rational(&parse_rational("0.49").unwrap()), "49/100");
    }
}
