// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact rational numbers for interval endpoints and widths.
//!
//! Conflict and nesting checks come down to endpoint comparisons, and
//! touching endpoints must compare exactly equal (`[0.3, 0.4]` against
//! `[0.4, 0.7]`), so values are stored as reduced fractions rather than
//! floating point. Text forms accept decimal literals with up to nine
//! fractional digits and fractions `a/b`; both components are capped at
//! 10^9, which keeps every derived comparison inside `i128`.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

/// Largest numerator or denominator accepted by the text forms.
pub const MAX_LITERAL_MAGNITUDE: i128 = 1_000_000_000;

/// A rational number in canonical reduced form (gcd 1, positive denominator).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    /// Builds `numer/denom`, reduced. Returns `None` when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            None
        } else {
            Some(Self(Ratio::new(i128::from(numer), i128::from(denom))))
        }
    }

    pub fn zero() -> Self {
        Self(Ratio::from_integer(0))
    }

    pub fn one() -> Self {
        Self(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

/// If `denom` is of the form 2^a * 5^b, returns the number of decimal digits
/// needed to write the fraction exactly (max(a, b)).
fn decimal_exponent(mut denom: i128) -> Option<u32> {
    let mut twos = 0;
    while denom % 2 == 0 {
        denom /= 2;
        twos += 1;
    }
    let mut fives = 0;
    while denom % 5 == 0 {
        denom /= 5;
        fives += 1;
    }
    (denom == 1).then_some(twos.max(fives))
}

impl fmt::Display for Rational {
    /// Canonical form: a minimal exact decimal when one exists within the
    /// nine fractional digits the text grammar accepts, otherwise the
    /// reduced fraction `n/d`. Everything printed re-parses to the same
    /// value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = self.numer();
        let denom = self.denom();
        if denom == 1 {
            return write!(f, "{numer}");
        }
        match decimal_exponent(denom).filter(|&digits| digits <= 9) {
            Some(digits) => {
                let scale = 10i128.pow(digits);
                // Exact by construction of `digits`; the reduced fraction
                // also guarantees the last digit is nonzero.
                let scaled = numer.abs() * scale / denom;
                let sign = if numer < 0 { "-" } else { "" };
                let int_part = scaled / scale;
                let frac_part = scaled % scale;
                write!(f, "{sign}{int_part}.{frac_part:0width$}", width = digits as usize)
            }
            None => write!(f, "{numer}/{denom}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid digit in number")]
    InvalidDigit,
    #[error("more than 9 fractional digits")]
    TooManyFractionalDigits,
    #[error("number out of range (limit {MAX_LITERAL_MAGNITUDE})")]
    OutOfRange,
    #[error("denominator must be positive")]
    ZeroDenominator,
}

fn parse_digits(text: &str) -> Result<i128, ParseRationalError> {
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::InvalidDigit);
    }
    let value: i128 = text.parse().map_err(|_| ParseRationalError::OutOfRange)?;
    if value > MAX_LITERAL_MAGNITUDE {
        return Err(ParseRationalError::OutOfRange);
    }
    Ok(value)
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((numer, denom)) = s.split_once('/') {
            let numer = parse_digits(numer.trim())?;
            let denom = parse_digits(denom.trim())?;
            if denom == 0 {
                return Err(ParseRationalError::ZeroDenominator);
            }
            Ok(Self(Ratio::new(numer, denom)))
        } else if let Some((int_part, frac_part)) = s.split_once('.') {
            let int_value = parse_digits(int_part)?;
            if frac_part.is_empty() {
                return Err(ParseRationalError::Empty);
            }
            if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseRationalError::InvalidDigit);
            }
            if frac_part.len() > 9 {
                return Err(ParseRationalError::TooManyFractionalDigits);
            }
            let scale = 10i128.pow(frac_part.len() as u32);
            let frac_value: i128 = frac_part.parse().expect("digits verified");
            Ok(Self(Ratio::new(int_value * scale + frac_value, scale)))
        } else {
            Ok(Self(Ratio::from_integer(parse_digits(s)?)))
        }
    }
}
