//! Exact rational arithmetic helpers.
//!
//! Certificates never carry floats: rationals are written as `"p/q"` strings
//! (always with an explicit denominator) and read back from `"p/q"`, integers
//! or finite decimals.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn from_usize(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floor of a rational as `i64` (saturating for absurd magnitudes).
pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().unwrap_or(if r.is_negative() {
        i64::MIN
    } else {
        i64::MAX
    })
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().unwrap_or(if r.is_negative() {
        i64::MIN
    } else {
        i64::MAX
    })
}

/// Approximate value, for human-readable reports only.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.125"`.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Invalid(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut value = Rational::new(
            digits.parse::<BigInt>().map_err(|_| bad())?,
            num::pow(BigInt::from(10), frac.len()),
        );
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn is_in_open_unit(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::one()
}

/// `serde(with = "crate::rational::pq")` for a single rational field.
pub mod pq {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// `serde(with = "crate::rational::pq_vec")` for a vector of rationals.
pub mod pq_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_pq(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse("20/9").unwrap(), ratio(20, 9));
        assert_eq!(parse(" 3 ").unwrap(), int(3));
        assert_eq!(parse("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn always_writes_a_denominator() {
        assert_eq!(to_pq(&int(4)), "4/1");
        assert_eq!(to_pq(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_i64(&ratio(19, 2)), 9);
        assert_eq!(ceil_i64(&ratio(19, 2)), 10);
        assert_eq!(floor_i64(&ratio(-1, 2)), -1);
    }
}
