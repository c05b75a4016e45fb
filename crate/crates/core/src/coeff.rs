//! Coefficient rings for truncated series and exact entropy parameters.
//!
//! Two backends implement [`Coefficient`]: [`BigRational`] for exact symbolic
//! identities (group-law axioms, reversion, expansion coefficients) and `f64`
//! for evaluation. Nothing in the axiom verification path ever runs in `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arithmetic required of a series coefficient.
pub trait Coefficient:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Lift an entropy parameter into this ring (exact value for rationals,
    /// the decimal value as parsed for floats).
    fn from_param(p: &Param) -> Self;

    fn to_f64(&self) -> f64;

    /// `true` for backends where `==` is a meaningful identity test.
    fn is_exact() -> bool;
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_param(p: &Param) -> Self {
        p.exact.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn is_exact() -> bool {
        true
    }
}

impl Coefficient for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn from_param(p: &Param) -> Self {
        p.value
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a rational number: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parse `"3"`, `"-1/2"`, `"0.25"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let input = s.trim();
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    if input.is_empty() {
        return Err(err("empty"));
    }
    if let Some((num, den)) = input.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let den = parse_decimal(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(num / den);
    }
    parse_decimal(input).ok_or_else(|| err("not a decimal or p/q literal"))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Format an exact rational as `p/q` (or `p` for integers).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A real entropy parameter carried both exactly and as a double.
///
/// Parameters parsed from text keep their decimal meaning (`0.3` is exactly
/// `3/10`), so expansion coefficients computed from them are exact.
#[derive(Debug, Clone)]
pub struct Param {
    exact: BigRational,
    value: f64,
}

impl Param {
    pub fn new(exact: BigRational) -> Self {
        let value = ratio_to_f64(&exact);
        Param { exact, value }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Param::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Param::ratio(n, 1)
    }

    /// The shortest decimal that rounds to `x`, taken exactly (`0.8` is
    /// `4/5`). Panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "parameter must be finite");
        let exact = parse_rational(&x.to_string()).expect("finite doubles print as decimals");
        Param { exact, value: x }
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exact.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.exact.is_negative()
    }
}

impl PartialEq for Param {
    fn eq(&self, other: &Self) -> bool {
        self.exact == other.exact
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::from_f64(x)
    }
}

impl From<BigRational> for Param {
    fn from(r: BigRational) -> Self {
        Param::new(r)
    }
}

impl FromStr for Param {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let exact = parse_rational(s)?;
        // decimals keep the correctly rounded double of their literal
        let value = if s.contains('/') {
            ratio_to_f64(&exact)
        } else {
            s.trim().parse::<f64>().unwrap_or_else(|_| ratio_to_f64(&exact))
        };
        Ok(Param { exact, value })
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact.denom().bits() <= 64 {
            f.write_str(&format_rational(&self.exact))
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
