//! Exact rational scalars and their canonical text form.
//!
//! Every number in the engine is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. The text form
//! is `"p/q"`, or `"p"` when `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("`{0}` is not a rational of the form p/q")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` is not in lowest terms with positive denominator (canonical form is `{1}`)")]
    NotCanonical(String, String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn parse_integer(s: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    BigInt::from_str(s).map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

/// Parses any `p/q` or `p` string, reducing it.
pub fn parse_lenient(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => {
            if d.starts_with('-') {
                return Err(ParseRationalError::Malformed(s.to_string()));
            }
            (parse_integer(n, s)?, parse_integer(d, s)?)
        }
        None => (parse_integer(s, s)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Parses a rational that must already be in canonical form.
pub fn parse_canonical(s: &str) -> Result<Rational, ParseRationalError> {
    let value = parse_lenient(s)?;
    let canonical = format_rational(&value);
    if canonical != s {
        return Err(ParseRationalError::NotCanonical(s.to_string(), canonical));
    }
    Ok(value)
}

pub fn format_rational(r: &Rational) -> String {
    // BigRational's Display already prints reduced `p/q`, or `p` for integers.
    r.to_string()
}

pub(crate) fn min_of<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<Rational> {
    values.into_iter().min().cloned()
}

pub(crate) fn max_of<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<Rational> {
    values.into_iter().max().cloned()
}
