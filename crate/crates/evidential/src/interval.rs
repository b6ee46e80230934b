// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed probability intervals and the predicates the resolution
//! algorithms are built on.
//!
//! An [`Interval`] is a closed rational subinterval of `[0, 1]`. Two
//! intervals *agree* when one nests in the other and *conflict* otherwise;
//! intervals that merely touch at an endpoint without nesting still count
//! as conflicting. The *cover* of two intervals is the smallest interval
//! containing both. Every pair of intervals is therefore in exactly one of
//! three relations: `a` nests in `b`, `b` nests in `a` (both only when
//! equal), or they conflict.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("lower exceeds upper")]
    LowerExceedsUpper,
    #[error("interval endpoint out of [0, 1]")]
    OutOfUnitRange,
    #[error("empty interval set")]
    EmptySet,
}

/// A closed interval `[lower, upper]` with `0 <= lower <= upper <= 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational) -> Result<Self, IntervalError> {
        if lower > upper {
            return Err(IntervalError::LowerExceedsUpper);
        }
        if lower < Rational::zero() || upper > Rational::one() {
            return Err(IntervalError::OutOfUnitRange);
        }
        Ok(Self { lower, upper })
    }

    /// The point interval `[p, p]`.
    pub fn point(p: Rational) -> Result<Self, IntervalError> {
        Self::new(p, p)
    }

    /// The vacuous interval `[0, 1]`.
    pub fn unit() -> Self {
        Self { lower: Rational::zero(), upper: Rational::one() }
    }

    pub fn lower(&self) -> Rational {
        self.lower
    }

    pub fn upper(&self) -> Rational {
        self.upper
    }

    pub fn width(&self) -> Rational {
        self.upper - self.lower
    }

    /// True when `self` is contained in `other`.
    pub fn nests_in(&self, other: &Interval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    /// True when neither interval nests in the other.
    pub fn conflicts(&self, other: &Interval) -> bool {
        !self.nests_in(other) && !other.nests_in(self)
    }

    /// Negation of [`Interval::conflicts`].
    pub fn agrees(&self, other: &Interval) -> bool {
        !self.conflicts(other)
    }

    /// The smallest interval containing both arguments.
    pub fn cover(&self, other: &Interval) -> Interval {
        Interval {
            lower: self.lower.min(other.lower),
            upper: self.upper.max(other.upper),
        }
    }

    /// Sort key realizing the deterministic "narrowest first" order:
    /// ascending width, then lower, then upper endpoint.
    pub fn narrowness_key(&self) -> (Rational, Rational, Rational) {
        (self.width(), self.lower, self.upper)
    }
}

/// The narrowest interval of a nonempty collection, ties broken by
/// (width, lower, upper).
pub fn narrowest<I>(intervals: I) -> Result<Interval, IntervalError>
where
    I: IntoIterator<Item = Interval>,
{
    intervals
        .into_iter()
        .min_by_key(Interval::narrowness_key)
        .ok_or(IntervalError::EmptySet)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseIntervalError {
    #[error("expected '['")]
    MissingOpen,
    #[error("expected ']'")]
    MissingClose,
    #[error("expected ',' between endpoints")]
    MissingComma,
    #[error("bad endpoint: {0}")]
    Endpoint(#[from] ParseRationalError),
    #[error(transparent)]
    Invalid(#[from] IntervalError),
}

impl FromStr for Interval {
    type Err = ParseIntervalError;

    /// Parses the text form `[L, U]`; endpoints are decimal literals or
    /// fractions `a/b`, whitespace around them is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let body = s.strip_prefix('[').ok_or(ParseIntervalError::MissingOpen)?;
        let body = body.strip_suffix(']').ok_or(ParseIntervalError::MissingClose)?;
        let (lower, upper) = body.split_once(',').ok_or(ParseIntervalError::MissingComma)?;
        let lower: Rational = lower.parse()?;
        let upper: Rational = upper.parse()?;
        Ok(Interval::new(lower, upper)?)
    }
}
