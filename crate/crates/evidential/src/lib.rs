// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reference-class probability intervals.
//!
//! Given statements about set memberships, strict subset relations, and
//! interval-valued proportions, this crate extracts the candidate reference
//! classes for a query, filters out classes dominated by a conflicting known
//! subclass, and combines the remaining interval evidence into a single
//! probability interval.
//!
//! The crate is split along the pipeline:
//!
//! * [`rational`] / [`interval`]: exact arithmetic and the
//!   nesting/conflict/cover predicates.
//! * [`resolution`]: the conflict-resolution strategies and a brute-force
//!   oracle for cross-checking them.
//! * [`kb`]: the statement store, subset chaining, dominance filtering, and
//!   query answering.
//! * [`parse`]: the line-oriented knowledge-base DSL and its serializer.

pub mod interval;
pub mod kb;
pub mod parse;
pub mod rational;
pub mod resolution;

pub use interval::{narrowest, Interval, IntervalError};
pub use kb::{Candidate, KbError, KnowledgeBase, QueryError, QueryResult, QueryStatus, Statement};
pub use parse::{parse_interval_list, parse_kb, serialize_kb, ParseError, ParseWarning, ParsedKb};
pub use rational::Rational;
pub use resolution::{
    oracle_resolve, resolve, resolve_alg1, resolve_alg2, resolve_alg2prime, Algorithm,
    IterationTrace, ResolutionResult, ResolveError, TrackedInterval, UnknownAlgorithm,
    ORACLE_MAX_DEFAULT,
};
