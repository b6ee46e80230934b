// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Conflict resolution over sets of candidate probability intervals.
//!
//! Each strategy combines a nonempty list of intervals into a single answer
//! interval plus the set of input indices (constituents) whose cover it is:
//!
//! * [`resolve_alg1`] is accumulative: every pass adds the covers of all
//!   conflicting pairs to the working set and marks both members of each
//!   pair. Marked intervals stay in the set and keep participating in
//!   conflict checks, so a wide marked interval can block the selection of a
//!   narrower cover. Stops once a pass generates no interval that is not
//!   already present; returns the narrowest unmarked interval.
//! * [`resolve_alg2`] is pruning: like the accumulative strategy, but each
//!   pass deletes the intervals it marked before merging in the new covers,
//!   so settled conflicts stop interfering with narrower survivors. Stops
//!   once a pass generates nothing.
//! * [`resolve_alg2prime`] is selection: walks the candidates in ascending
//!   width order, keeps each interval reached, discards every remaining
//!   interval that agrees with a kept one, and returns the cover of the kept
//!   set.
//! * [`oracle_resolve`] is brute force: enumerates every subset of the
//!   distinct inputs and directly applies the declarative characterization
//!   of the selection result (a subset qualifies when every excluded
//!   interval has a member nesting in it; the answer is the narrowest
//!   qualifying cover). Exponential; intended for cross-checking the fast
//!   strategies on small inputs.
//!
//! The pruning and selection strategies usually coincide but are *not*
//! equivalent: deleting a marked narrow interval can erase nesting
//! information that the selection strategy preserves by keeping that
//! interval as a representative (see the divergence regression test below).
//! Exhaustive enumeration shows the selection result always nests in the
//! pruning result and that the selection strategy matches the brute-force
//! characterization exactly.
//!
//! The working set always has set semantics: duplicate intervals merge and
//! their constituent indices are unioned. All strategies are pure functions
//! of the input multiset, so results are invariant under permutation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::interval::Interval;

/// Default cap on distinct inputs for [`oracle_resolve`].
pub const ORACLE_MAX_DEFAULT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Alg1,
    Alg2,
    Alg2Prime,
    Oracle,
}

impl Algorithm {
    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg2Prime => "alg2prime",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm tag `{0}`")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alg1" => Ok(Algorithm::Alg1),
            "alg2" => Ok(Algorithm::Alg2),
            "alg2prime" => Ok(Algorithm::Alg2Prime),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("no candidates")]
    NoCandidates,
    #[error("oracle size limit exceeded: {distinct} distinct intervals (max {max})")]
    OracleSizeExceeded { distinct: usize, max: usize },
}

/// An interval in a working set together with the indices of the original
/// inputs it covers. `interval` always equals the cover of the inputs named
/// by `constituents`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedInterval {
    pub interval: Interval,
    pub constituents: BTreeSet<usize>,
    pub marked: bool,
}

/// One pass of an iterative strategy: the covers it generated and the
/// working set it left behind.
///
/// For the accumulative and pruning strategies `generated` holds the covers
/// of the pass's conflicting pairs. For the selection strategy each entry
/// records the interval kept that round. The oracle emits a single entry
/// whose `generated` lists every minimal-width qualifying cover (more than
/// one entry means distinct covers tied on width) and whose `surviving`
/// holds the chosen one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub iteration: usize,
    pub generated: Vec<TrackedInterval>,
    pub surviving: Vec<TrackedInterval>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionResult {
    pub interval: Interval,
    /// Indices into the original input list; the returned interval is the
    /// cover of exactly these inputs, and the reference class reported for
    /// the answer may be any class associated with them.
    pub constituents: BTreeSet<usize>,
    pub trace: Vec<IterationTrace>,
    pub algorithm: Algorithm,
}

/// Runs the chosen strategy. [`Algorithm::Oracle`] uses
/// [`ORACLE_MAX_DEFAULT`] as its size cap.
pub fn resolve(inputs: &[Interval], algorithm: Algorithm) -> Result<ResolutionResult, ResolveError> {
    match algorithm {
        Algorithm::Alg1 => resolve_alg1(inputs),
        Algorithm::Alg2 => resolve_alg2(inputs),
        Algorithm::Alg2Prime => resolve_alg2prime(inputs),
        Algorithm::Oracle => oracle_resolve(inputs, ORACLE_MAX_DEFAULT),
    }
}

#[derive(Debug, Clone)]
struct Entry {
    constituents: BTreeSet<usize>,
    marked: bool,
}

/// Distinct intervals with merged constituent indices.
fn dedup(inputs: &[Interval]) -> Result<BTreeMap<Interval, BTreeSet<usize>>, ResolveError> {
    if inputs.is_empty() {
        return Err(ResolveError::NoCandidates);
    }
    let mut distinct: BTreeMap<Interval, BTreeSet<usize>> = BTreeMap::new();
    for (index, interval) in inputs.iter().enumerate() {
        distinct.entry(*interval).or_default().insert(index);
    }
    Ok(distinct)
}

fn singleton_result(
    distinct: &BTreeMap<Interval, BTreeSet<usize>>,
    algorithm: Algorithm,
) -> Option<ResolutionResult> {
    if distinct.len() != 1 {
        return None;
    }
    let (interval, constituents) = distinct.iter().next().expect("nonempty");
    Some(ResolutionResult {
        interval: *interval,
        constituents: constituents.clone(),
        trace: Vec::new(),
        algorithm,
    })
}

fn snapshot(work: &BTreeMap<Interval, Entry>) -> Vec<TrackedInterval> {
    work.iter()
        .map(|(interval, entry)| TrackedInterval {
            interval: *interval,
            constituents: entry.constituents.clone(),
            marked: entry.marked,
        })
        .collect()
}

fn tracked_covers(generated: &BTreeMap<Interval, BTreeSet<usize>>) -> Vec<TrackedInterval> {
    generated
        .iter()
        .map(|(interval, constituents)| TrackedInterval {
            interval: *interval,
            constituents: constituents.clone(),
            marked: false,
        })
        .collect()
}

/// Covers of all conflicting pairs in the working set, plus the set of
/// intervals that took part in at least one conflict.
fn conflict_pass(
    work: &BTreeMap<Interval, Entry>,
) -> (BTreeMap<Interval, BTreeSet<usize>>, BTreeSet<Interval>) {
    let keys: Vec<Interval> = work.keys().copied().collect();
    let mut generated: BTreeMap<Interval, BTreeSet<usize>> = BTreeMap::new();
    let mut hit: BTreeSet<Interval> = BTreeSet::new();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            if a.conflicts(b) {
                let cover = a.cover(b);
                let merged = generated.entry(cover).or_default();
                merged.extend(work[a].constituents.iter().copied());
                merged.extend(work[b].constituents.iter().copied());
                hit.insert(*a);
                hit.insert(*b);
            }
        }
    }
    (generated, hit)
}

/// Accumulative strategy: conflicting pairs contribute their covers, both
/// members are marked, and nothing is ever removed. The narrowest unmarked
/// interval wins once a pass stops producing new intervals.
pub fn resolve_alg1(inputs: &[Interval]) -> Result<ResolutionResult, ResolveError> {
    let distinct = dedup(inputs)?;
    if let Some(result) = singleton_result(&distinct, Algorithm::Alg1) {
        return Ok(result);
    }

    let mut work: BTreeMap<Interval, Entry> = distinct
        .into_iter()
        .map(|(interval, constituents)| (interval, Entry { constituents, marked: false }))
        .collect();
    let mut trace = Vec::new();

    loop {
        let (generated, hit) = conflict_pass(&work);
        for interval in &hit {
            work.get_mut(interval).expect("hit intervals come from work").marked = true;
        }
        let mut grew = false;
        for (cover, constituents) in &generated {
            match work.get_mut(cover) {
                Some(entry) => entry.constituents.extend(constituents.iter().copied()),
                None => {
                    work.insert(
                        *cover,
                        Entry { constituents: constituents.clone(), marked: false },
                    );
                    grew = true;
                }
            }
        }
        trace.push(IterationTrace {
            iteration: trace.len() + 1,
            generated: tracked_covers(&generated),
            surviving: snapshot(&work),
        });
        // Fixpoint: once the set of intervals stops growing, every later
        // pass would regenerate the same covers and the same marks.
        if !grew {
            break;
        }
    }

    let (interval, entry) = work
        .iter()
        .filter(|(_, entry)| !entry.marked)
        .min_by_key(|(interval, _)| interval.narrowness_key())
        .expect("the widest interval never conflicts, so one interval stays unmarked");
    Ok(ResolutionResult {
        interval: *interval,
        constituents: entry.constituents.clone(),
        trace,
        algorithm: Algorithm::Alg1,
    })
}

/// Pruning strategy: like [`resolve_alg1`], but every pass deletes the
/// intervals it marked before merging in the generated covers.
pub fn resolve_alg2(inputs: &[Interval]) -> Result<ResolutionResult, ResolveError> {
    let distinct = dedup(inputs)?;
    if let Some(result) = singleton_result(&distinct, Algorithm::Alg2) {
        return Ok(result);
    }

    let mut work: BTreeMap<Interval, Entry> = distinct
        .into_iter()
        .map(|(interval, constituents)| (interval, Entry { constituents, marked: false }))
        .collect();
    let mut trace = Vec::new();

    loop {
        let (generated, hit) = conflict_pass(&work);
        let quiescent = generated.is_empty();
        for interval in &hit {
            work.remove(interval);
        }
        for (cover, constituents) in &generated {
            work.entry(*cover)
                .or_insert_with(|| Entry { constituents: BTreeSet::new(), marked: false })
                .constituents
                .extend(constituents.iter().copied());
        }
        trace.push(IterationTrace {
            iteration: trace.len() + 1,
            generated: tracked_covers(&generated),
            surviving: snapshot(&work),
        });
        if quiescent {
            break;
        }
    }

    let (interval, entry) = work
        .iter()
        .min_by_key(|(interval, _)| interval.narrowness_key())
        .expect("covers replace deleted intervals, so the set stays nonempty");
    Ok(ResolutionResult {
        interval: *interval,
        constituents: entry.constituents.clone(),
        trace,
        algorithm: Algorithm::Alg2,
    })
}

/// Selection strategy: ascending-width walk keeping survivors and discarding
/// whatever agrees with them; answers with the cover of the kept intervals.
///
/// Width ties order by (lower, upper). The kept intervals are pairwise
/// conflicting by construction.
pub fn resolve_alg2prime(inputs: &[Interval]) -> Result<ResolutionResult, ResolveError> {
    let distinct = dedup(inputs)?;
    if let Some(result) = singleton_result(&distinct, Algorithm::Alg2Prime) {
        return Ok(result);
    }

    let mut items: Vec<(Interval, BTreeSet<usize>)> = distinct.into_iter().collect();
    items.sort_by_key(|(interval, _)| interval.narrowness_key());

    let n = items.len();
    let mut extracted = vec![false; n];
    let mut marked = vec![false; n];
    let mut kept: Vec<usize> = Vec::new();
    let mut trace = Vec::new();

    while let Some(next) = (0..n).find(|&i| !extracted[i] && !marked[i]) {
        extracted[next] = true;
        kept.push(next);
        for j in 0..n {
            if !extracted[j] && !marked[j] && items[j].0.agrees(&items[next].0) {
                marked[j] = true;
            }
        }
        let surviving = (0..n)
            .filter(|&j| !extracted[j])
            .map(|j| TrackedInterval {
                interval: items[j].0,
                constituents: items[j].1.clone(),
                marked: marked[j],
            })
            .collect();
        trace.push(IterationTrace {
            iteration: kept.len(),
            generated: vec![TrackedInterval {
                interval: items[next].0,
                constituents: items[next].1.clone(),
                marked: false,
            }],
            surviving,
        });
    }

    let interval = kept
        .iter()
        .map(|&i| items[i].0)
        .reduce(|a, b| a.cover(&b))
        .expect("at least one interval is always kept");
    let constituents = kept
        .iter()
        .flat_map(|&i| items[i].1.iter().copied())
        .collect();
    Ok(ResolutionResult {
        interval,
        constituents,
        trace,
        algorithm: Algorithm::Alg2Prime,
    })
}

/// Brute-force reference: enumerates every nonempty subset `S` of the
/// distinct inputs, keeps those where each excluded interval contains some
/// member of `S` at most as wide as itself, and returns the qualifying
/// cover of minimal width, ties broken by (lower, upper).
///
/// The single trace entry lists all minimal-width qualifying covers, so a
/// `generated` list longer than one records a width tie between distinct
/// covers.
pub fn oracle_resolve(inputs: &[Interval], max_size: usize) -> Result<ResolutionResult, ResolveError> {
    let distinct = dedup(inputs)?;
    // The bitmask enumeration bounds the oracle at 63 distinct intervals
    // regardless of the caller's cap.
    let cap = max_size.min(63);
    if distinct.len() > cap {
        return Err(ResolveError::OracleSizeExceeded { distinct: distinct.len(), max: cap });
    }
    if let Some(result) = singleton_result(&distinct, Algorithm::Oracle) {
        return Ok(result);
    }

    let items: Vec<(Interval, BTreeSet<usize>)> = distinct.into_iter().collect();
    let n = items.len();
    let mut best_width = None;
    let mut minimal: BTreeMap<Interval, BTreeSet<usize>> = BTreeMap::new();

    for mask in 1u64..(1 << n) {
        let in_subset = |i: usize| mask & (1 << i) != 0;
        let qualifies = (0..n).filter(|&i| !in_subset(i)).all(|excluded| {
            (0..n).any(|member| {
                in_subset(member)
                    && items[member].0.nests_in(&items[excluded].0)
                    && items[member].0.width() <= items[excluded].0.width()
            })
        });
        if !qualifies {
            continue;
        }
        let cover = (0..n)
            .filter(|&i| in_subset(i))
            .map(|i| items[i].0)
            .reduce(|a, b| a.cover(&b))
            .expect("mask is nonzero");
        let width = cover.width();
        if best_width.is_none_or(|best| width < best) {
            best_width = Some(width);
            minimal.clear();
        }
        if best_width == Some(width) {
            let merged = minimal.entry(cover).or_default();
            for i in (0..n).filter(|&i| in_subset(i)) {
                merged.extend(items[i].1.iter().copied());
            }
        }
    }

    // The full set always qualifies vacuously, so a minimum exists.
    let (interval, constituents) = minimal
        .iter()
        .min_by_key(|(interval, _)| (interval.lower(), interval.upper()))
        .map(|(interval, constituents)| (*interval, constituents.clone()))
        .expect("full subset qualifies");
    let trace = vec![IterationTrace {
        iteration: 1,
        generated: tracked_covers(&minimal),
        surviving: vec![TrackedInterval {
            interval,
            constituents: constituents.clone(),
            marked: false,
        }],
    }];
    Ok(ResolutionResult { interval, constituents, trace, algorithm: Algorithm::Oracle })
}
