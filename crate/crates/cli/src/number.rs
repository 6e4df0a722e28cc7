use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

/// A positive parameter kept both exactly (for coefficient tables) and as
/// `f64` (for dynamics).
#[derive(Debug, Clone, PartialEq)]
pub struct Exact {
    pub rational: BigRational,
    pub value: f64,
}

impl FromStr for Exact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let rational = parse_rational(s)?;
        if !rational.is_positive() {
            return Err(format!("{s} must be positive"));
        }
        let value = rational.to_f64().filter(|v| v.is_finite() && *v > 0.0).ok_or(format!("{s} is out of f64 range"))?;
        Ok(Exact { rational, value })
    }
}

/// Parses `3`, `-0.37`, `1.5e-3` or `3/7` without rounding.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a number: {s:?}");
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp - i32::try_from(frac.len()).map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, shift.unsigned_abs()))
    } else {
        BigRational::new(digits, Pow::pow(&ten, shift.unsigned_abs()))
    };
    if neg && !r.is_zero() {
        r = -r;
    }
    Ok(r)
}
