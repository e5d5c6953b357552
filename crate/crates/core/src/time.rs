//! Exact time values.
//!
//! Every time, processing amount and accuracy in the solver is an exact
//! rational. Inputs are integers, but rounded tails, shifted windows and
//! accuracy multiples introduce fractions.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for all times and accuracies.
pub type Rational = Ratio<i64>;

/// Shorthand for an integral rational.
#[inline]
pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// Shorthand for `num / den`.
#[inline]
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Smallest integer greater than or equal to `value`.
pub fn ceil_int(value: Rational) -> i64 {
    value.ceil().to_integer()
}

/// Returns `f` when `epsilon == 1/f` for a positive integer `f`.
pub fn unit_fraction_denominator(epsilon: Rational) -> Option<i64> {
    if epsilon.is_positive() && epsilon.numer().is_one() {
        Some(*epsilon.denom())
    } else {
        None
    }
}

/// Error returned when an accuracy string cannot be read exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse `{}` as an exact rational", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parsed rational together with the notation it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParsedRational {
    pub value: Rational,
    /// `true` when the text used decimal notation such as `0.25`.
    pub decimal: bool,
}

impl FromStr for ParsedRational {
    type Err = ParseRationalError;

    /// Accepts `a/b`, plain integers and finite decimals (`0.125`), all
    /// converted exactly.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(text.to_string());
        let s = text.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| err())?;
            let den: i64 = den.trim().parse().map_err(|_| err())?;
            if den == 0 {
                return Err(err());
            }
            return Ok(ParsedRational {
                value: frac(num, den),
                decimal: false,
            });
        }
        if let Some((whole, fraction)) = s.split_once('.') {
            if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let negative = whole.starts_with('-');
            let whole_digits = whole.trim_start_matches(['-', '+']);
            if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let whole_value: i64 = if whole_digits.is_empty() {
                0
            } else {
                whole_digits.parse().map_err(|_| err())?
            };
            let scale = 10_i64.checked_pow(fraction.len() as u32).ok_or_else(err)?;
            let fraction_value: i64 = fraction.parse().map_err(|_| err())?;
            let mut value = frac(fraction_value, scale) + int(whole_value);
            if negative {
                value = -value;
            }
            return Ok(ParsedRational {
                value,
                decimal: true,
            });
        }
        let value: i64 = s.parse().map_err(|_| err())?;
        Ok(ParsedRational {
            value: int(value),
            decimal: false,
        })
    }
}

/// Formats a rational as `n` when integral and `num/den` otherwise.
pub fn display(value: Rational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fixed-point decimal rendering with `places` digits, rounded half away
/// from zero. Uses integer arithmetic only.
pub fn to_decimal(value: Rational, places: u32) -> String {
    let scale = 10_i128.pow(places);
    let num = *value.numer() as i128;
    let den = *value.denom() as i128;
    let scaled = num.abs() * scale;
    let (mut q, r) = scaled.div_rem(&den);
    if 2 * r >= den {
        q += 1;
    }
    let sign = if num < 0 && q != 0 { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{q}");
    }
    let whole = q / scale;
    let part = q % scale;
    format!("{sign}{whole}.{part:0width$}", width = places as usize)
}

/// Lossy conversion for display-only contexts.
pub fn approx_f64(value: Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Zero as a rational.
#[inline]
pub fn zero() -> Rational {
    Rational::zero()
}
