// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Statement store and query answering.
//!
//! A [`KnowledgeBase`] holds three kinds of statements (object membership,
//! strict subset relations between classes, and interval-valued proportions)
//! plus two derived closures: the transitive closure of the subset relation
//! (rejected if cyclic) and the membership closure obtained by chaining
//! memberships through it.
//!
//! Statistics attach only to explicitly named classes. Nothing is inferred
//! about intersections: knowing the proportion of a target within two
//! classes puts no nontrivial bound on the proportion within their
//! intersection, so an object belonging to both simply has two candidate
//! reference classes.
//!
//! [`KnowledgeBase::answer_query`] runs the full pipeline: collect the
//! candidate reference classes for `(object, target)`, drop every candidate
//! dominated by a known conflicting subclass, and then either report the
//! narrowest interval directly (when the survivors pairwise agree) or hand
//! the survivors to the chosen resolution strategy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::interval::{narrowest, Interval};
use crate::resolution::{resolve, Algorithm, ResolutionResult, ResolveError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    /// `object` is an element of `class`.
    Membership { object: String, class: String },
    /// `sub` is a strict subclass of `sup`.
    Subset { sub: String, sup: String },
    /// The proportion of `class` members having property `target` lies in
    /// `interval`.
    Proportion { target: String, class: String, interval: Interval },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("subset cycle involving {}", classes.join(", "))]
    SubsetCycle { classes: Vec<String> },
    #[error("duplicate proportion for ({target}, {class})")]
    DuplicateProportion { target: String, class: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("algorithm `{0}` is not available for queries")]
    UnsupportedAlgorithm(Algorithm),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

/// A reference class that contains the query object and carries statistics
/// about the target property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub class: String,
    pub interval: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryStatus {
    /// No candidate reference class survived; the answer is the vacuous
    /// `[0, 1]`.
    NoEvidence,
    /// The surviving candidates pairwise agree; the narrowest interval is
    /// the answer and no evidence combination happened.
    Nesting,
    /// Conflicts were present and a resolution strategy produced the answer.
    Resolved,
}

impl QueryStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            QueryStatus::NoEvidence => "no_evidence",
            QueryStatus::Nesting => "nesting",
            QueryStatus::Resolved => "resolved",
        }
    }
}

impl fmt::Display for QueryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub interval: Interval,
    /// Classes the answer can be attributed to: the narrowest candidate(s)
    /// in the nesting case, the constituent classes of the returned cover in
    /// the resolved case.
    pub reference_classes: BTreeSet<String>,
    pub dropped_by_dominance: BTreeSet<String>,
    /// Present only when a resolution strategy ran.
    pub resolution: Option<ResolutionResult>,
    pub status: QueryStatus,
}

/// Immutable store of statements with derived subset and membership
/// closures. Build once, query concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    statements: Vec<Statement>,
    /// class -> all strict supersets (transitive).
    supersets: BTreeMap<String, BTreeSet<String>>,
    /// object -> asserted classes plus everything reachable through the
    /// subset closure.
    memberships: BTreeMap<String, BTreeSet<String>>,
    /// (target, class) -> interval.
    proportions: BTreeMap<(String, String), Interval>,
}

impl KnowledgeBase {
    pub fn empty() -> Self {
        Self {
            statements: Vec::new(),
            supersets: BTreeMap::new(),
            memberships: BTreeMap::new(),
            proportions: BTreeMap::new(),
        }
    }

    /// Builds the derived closures. Statements are stored canonically
    /// (sorted, exact duplicates removed). Fails on subset cycles (a class
    /// reaching itself, including `subset X X`) and on conflicting duplicate
    /// proportion declarations; all such errors are collected.
    pub fn build(mut statements: Vec<Statement>) -> Result<Self, Vec<KbError>> {
        statements.sort();
        statements.dedup();

        let mut errors = Vec::new();
        let mut proportions: BTreeMap<(String, String), Interval> = BTreeMap::new();
        let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut asserted: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

        for statement in &statements {
            match statement {
                Statement::Membership { object, class } => {
                    asserted.entry(object.clone()).or_default().insert(class.clone());
                }
                Statement::Subset { sub, sup } => {
                    edges.entry(sub.clone()).or_default().insert(sup.clone());
                }
                Statement::Proportion { target, class, interval } => {
                    let key = (target.clone(), class.clone());
                    match proportions.get(&key) {
                        Some(existing) if existing != interval => {
                            errors.push(KbError::DuplicateProportion {
                                target: target.clone(),
                                class: class.clone(),
                            });
                        }
                        Some(_) => {}
                        None => {
                            proportions.insert(key, *interval);
                        }
                    }
                }
            }
        }

        let supersets = transitive_closure(&edges);
        for group in cyclic_groups(&supersets) {
            errors.push(KbError::SubsetCycle { classes: group });
        }

        if !errors.is_empty() {
            return Err(errors);
        }

        let memberships = asserted
            .into_iter()
            .map(|(object, classes)| {
                let mut closure = classes.clone();
                for class in &classes {
                    if let Some(above) = supersets.get(class) {
                        closure.extend(above.iter().cloned());
                    }
                }
                (object, closure)
            })
            .collect();

        Ok(Self { statements, supersets, memberships, proportions })
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    /// All classes the object belongs to, directly or through subset
    /// chaining.
    pub fn membership_closure(&self, object: &str) -> BTreeSet<String> {
        self.memberships.get(object).cloned().unwrap_or_default()
    }

    /// True when `sub` is a strict subclass of `sup` under the transitive
    /// closure of the asserted subset relation.
    pub fn is_strict_subset(&self, sub: &str, sup: &str) -> bool {
        self.supersets.get(sub).is_some_and(|above| above.contains(sup))
    }

    pub fn proportion(&self, target: &str, class: &str) -> Option<Interval> {
        self.proportions.get(&(target.to_string(), class.to_string())).copied()
    }

    /// Candidate reference classes for the query, in class-name order:
    /// classes the object belongs to for which statistics about the target
    /// are known.
    pub fn candidates_for(&self, object: &str, target: &str) -> Vec<Candidate> {
        let Some(classes) = self.memberships.get(object) else {
            return Vec::new();
        };
        classes
            .iter()
            .filter_map(|class| {
                self.proportions
                    .get(&(target.to_string(), class.clone()))
                    .map(|interval| Candidate { class: class.clone(), interval: *interval })
            })
            .collect()
    }

    /// Drops every candidate that has a known strict subclass among the
    /// candidates whose interval conflicts with it. All comparisons run
    /// against the original candidate list in one simultaneous pass, so the
    /// outcome does not depend on ordering.
    pub fn subset_dominance_filter(
        &self,
        candidates: &[Candidate],
    ) -> (Vec<Candidate>, BTreeSet<String>) {
        let dropped: BTreeSet<String> = candidates
            .iter()
            .filter(|wide| {
                candidates.iter().any(|narrow| {
                    narrow.class != wide.class
                        && self.is_strict_subset(&narrow.class, &wide.class)
                        && narrow.interval.conflicts(&wide.interval)
                })
            })
            .map(|candidate| candidate.class.clone())
            .collect();
        let kept = candidates
            .iter()
            .filter(|candidate| !dropped.contains(&candidate.class))
            .cloned()
            .collect();
        (kept, dropped)
    }

    /// Full query pipeline: candidate extraction, dominance filtering, then
    /// either the trivial nesting answer or conflict resolution with the
    /// chosen strategy (`alg1`, `alg2`, or `alg2prime`).
    pub fn answer_query(
        &self,
        object: &str,
        target: &str,
        algorithm: Algorithm,
    ) -> Result<QueryResult, QueryError> {
        if algorithm == Algorithm::Oracle {
            return Err(QueryError::UnsupportedAlgorithm(algorithm));
        }

        let candidates = self.candidates_for(object, target);
        let (kept, dropped_by_dominance) = self.subset_dominance_filter(&candidates);

        if kept.is_empty() {
            return Ok(QueryResult {
                interval: Interval::unit(),
                reference_classes: BTreeSet::new(),
                dropped_by_dominance,
                resolution: None,
                status: QueryStatus::NoEvidence,
            });
        }

        let intervals: Vec<Interval> = kept.iter().map(|c| c.interval).collect();
        let pairwise_agreeing = intervals
            .iter()
            .enumerate()
            .all(|(i, a)| intervals[i + 1..].iter().all(|b| a.agrees(b)));

        if pairwise_agreeing {
            let interval = narrowest(intervals.iter().copied()).expect("kept is nonempty");
            let reference_classes = kept
                .iter()
                .filter(|c| c.interval == interval)
                .map(|c| c.class.clone())
                .collect();
            return Ok(QueryResult {
                interval,
                reference_classes,
                dropped_by_dominance,
                resolution: None,
                status: QueryStatus::Nesting,
            });
        }

        let resolution = resolve(&intervals, algorithm)?;
        let reference_classes = resolution
            .constituents
            .iter()
            .map(|&index| kept[index].class.clone())
            .collect();
        Ok(QueryResult {
            interval: resolution.interval,
            reference_classes,
            dropped_by_dominance,
            resolution: Some(resolution),
            status: QueryStatus::Resolved,
        })
    }
}

/// class -> everything reachable through the edges.
fn transitive_closure(
    edges: &BTreeMap<String, BTreeSet<String>>,
) -> BTreeMap<String, BTreeSet<String>> {
    let mut closure = BTreeMap::new();
    for start in edges.keys() {
        let mut reach: BTreeSet<String> = BTreeSet::new();
        let mut stack: Vec<&String> = edges[start].iter().collect();
        while let Some(node) = stack.pop() {
            if reach.insert(node.clone()) {
                if let Some(next) = edges.get(node) {
                    stack.extend(next.iter());
                }
            }
        }
        closure.insert(start.clone(), reach);
    }
    closure
}

/// Groups of classes that can reach themselves, one group per strongly
/// connected component, each sorted; groups ordered by first member.
fn cyclic_groups(closure: &BTreeMap<String, BTreeSet<String>>) -> Vec<Vec<String>> {
    let cyclic: Vec<&String> = closure
        .iter()
        .filter(|(node, reach)| reach.contains(*node))
        .map(|(node, _)| node)
        .collect();
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut seen: BTreeSet<&String> = BTreeSet::new();
    for &node in &cyclic {
        if seen.contains(node) {
            continue;
        }
        let group: Vec<String> = cyclic
            .iter()
            .filter(|&&other| {
                other == node
                    || (closure[node].contains(other) && closure[other].contains(node))
            })
            .map(|&other| {
                seen.insert(other);
                other.clone()
            })
            .collect();
        groups.push(group);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: &str, hi: &str) -> Interval {
        format!("[{lo}, {hi}]").parse().unwrap()
    }

    fn member(object: &str, class: &str) -> Statement {
        Statement::Membership { object: object.into(), class: class.into() }
    }

    fn subset(sub: &str, sup: &str) -> Statement {
        Statement::Subset { sub: sub.into(), sup: sup.into() }
    }

    fn stat(target: &str, class: &str, lo: &str, hi: &str) -> Statement {
        Statement::Proportion { target: target.into(), class: class.into(), interval: iv(lo, hi) }
    }

    fn berries_kb() -> KnowledgeBase {
        KnowledgeBase::build(vec![
            member("berries", "RedBerries"),
            member("berries", "RainyDayBerries"),
            member("berries", "ThisRegionBerries"),
            member("berries", "SoftBerries"),
            stat("Edible", "RedBerries", "0.70", "0.90"),
            stat("Edible", "RainyDayBerries", "0.30", "0.50"),
            stat("Edible", "ThisRegionBerries", "0.70", "0.75"),
            stat("Edible", "SoftBerries", "0.35", "0.45"),
        ])
        .unwrap()
    }

    #[test]
    fn berries_has_four_candidates() {
        let kb = berries_kb();
        let candidates = kb.candidates_for("berries", "Edible");
        assert_eq!(candidates.len(), 4);
        // Deterministic class-name order.
        let classes: Vec<&str> = candidates.iter().map(|c| c.class.as_str()).collect();
        assert_eq!(
            classes,
            ["RainyDayBerries", "RedBerries", "SoftBerries", "ThisRegionBerries"]
        );
    }

    #[test]
    fn membership_chains_through_subsets() {
        let kb = KnowledgeBase::build(vec![
            subset("A", "B"),
            subset("B", "C"),
            member("o", "A"),
        ])
        .unwrap();
        assert_eq!(
            kb.membership_closure("o"),
            BTreeSet::from(["A".to_string(), "B".to_string(), "C".to_string()])
        );
        assert!(kb.is_strict_subset("A", "C"));
        assert!(!kb.is_strict_subset("C", "A"));
    }

    #[test]
    fn subset_cycles_are_rejected() {
        let errors = KnowledgeBase::build(vec![subset("A", "B"), subset("B", "A")]).unwrap_err();
        assert_eq!(
            errors,
            vec![KbError::SubsetCycle { classes: vec!["A".into(), "B".into()] }]
        );
        let errors = KnowledgeBase::build(vec![subset("X", "X")]).unwrap_err();
        assert_eq!(errors, vec![KbError::SubsetCycle { classes: vec!["X".into()] }]);
    }

    #[test]
    fn conflicting_duplicate_proportion_is_rejected() {
        let errors = KnowledgeBase::build(vec![
            stat("T", "S", "0.1", "0.2"),
            stat("T", "S", "0.3", "0.4"),
        ])
        .unwrap_err();
        assert_eq!(
            errors,
            vec![KbError::DuplicateProportion { target: "T".into(), class: "S".into() }]
        );
        // An identical restatement is merely redundant.
        let kb = KnowledgeBase::build(vec![
            stat("T", "S", "0.1", "0.2"),
            stat("T", "S", "0.1", "0.2"),
        ])
        .unwrap();
        assert_eq!(kb.statements().len(), 1);
    }

    #[test]
    fn dominance_drops_conflicting_superclass() {
        let kb = KnowledgeBase::build(vec![
            subset("Red", "Soft"),
            member("item", "Red"),
            stat("Edible", "Red", "0.7", "0.9"),
            stat("Edible", "Soft", "0.35", "0.45"),
        ])
        .unwrap();
        let candidates = kb.candidates_for("item", "Edible");
        assert_eq!(candidates.len(), 2); // Soft membership derived by chaining
        let (kept, dropped) = kb.subset_dominance_filter(&candidates);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].class, "Red");
        assert_eq!(dropped, BTreeSet::from(["Soft".to_string()]));
    }

    #[test]
    fn dominance_is_identity_without_subset_knowledge() {
        let kb = berries_kb();
        let candidates = kb.candidates_for("berries", "Edible");
        let (kept, dropped) = kb.subset_dominance_filter(&candidates);
        assert_eq!(kept.len(), 4);
        assert!(dropped.is_empty());
    }

    #[test]
    fn dominance_chains_through_the_closure() {
        // S1 ⊂ S2 ⊂ S3 with conflicting statistics: the transitive closure
        // lets the most specific class silence both ancestors.
        let kb = KnowledgeBase::build(vec![
            subset("S1", "S2"),
            subset("S2", "S3"),
            member("o", "S1"),
            stat("T", "S1", "0.8", "0.9"),
            stat("T", "S2", "0.1", "0.3"),
            stat("T", "S3", "0.4", "0.5"),
        ])
        .unwrap();
        let candidates = kb.candidates_for("o", "T");
        assert_eq!(candidates.len(), 3);
        let (kept, dropped) = kb.subset_dominance_filter(&candidates);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].class, "S1");
        assert_eq!(dropped, BTreeSet::from(["S2".to_string(), "S3".to_string()]));
    }

    #[test]
    fn dominance_keeps_agreeing_subset_pairs() {
        let kb = KnowledgeBase::build(vec![
            subset("Narrow", "Wide"),
            member("o", "Narrow"),
            stat("T", "Narrow", "0.4", "0.5"),
            stat("T", "Wide", "0.3", "0.6"),
        ])
        .unwrap();
        let candidates = kb.candidates_for("o", "T");
        let (kept, dropped) = kb.subset_dominance_filter(&candidates);
        assert_eq!(kept.len(), 2);
        assert!(dropped.is_empty());
    }

    #[test]
    fn query_berries_conservative() {
        let kb = berries_kb();
        let result = kb.answer_query("berries", "Edible", Algorithm::Alg1).unwrap();
        assert_eq!(result.interval, iv("0.30", "0.90"));
        assert_eq!(result.status, QueryStatus::Resolved);
    }

    #[test]
    fn query_berries_selection() {
        let kb = berries_kb();
        let result = kb.answer_query("berries", "Edible", Algorithm::Alg2Prime).unwrap();
        assert_eq!(result.interval, iv("0.35", "0.75"));
        assert_eq!(
            result.reference_classes,
            BTreeSet::from(["SoftBerries".to_string(), "ThisRegionBerries".to_string()])
        );
    }

    #[test]
    fn query_single_candidate_is_nesting() {
        let kb = KnowledgeBase::build(vec![
            member("o", "S"),
            stat("T", "S", "0.2", "0.3"),
        ])
        .unwrap();
        let result = kb.answer_query("o", "T", Algorithm::Alg2).unwrap();
        assert_eq!(result.interval, iv("0.2", "0.3"));
        assert_eq!(result.status, QueryStatus::Nesting);
        assert_eq!(result.reference_classes, BTreeSet::from(["S".to_string()]));
        assert!(result.resolution.is_none());
    }

    #[test]
    fn query_unknown_object_is_no_evidence() {
        let kb = berries_kb();
        let result = kb.answer_query("ghost", "Edible", Algorithm::Alg1).unwrap();
        assert_eq!(result.interval, Interval::unit());
        assert_eq!(result.status, QueryStatus::NoEvidence);
        assert!(result.reference_classes.is_empty());
    }

    #[test]
    fn query_rejects_oracle() {
        let kb = berries_kb();
        assert_eq!(
            kb.answer_query("berries", "Edible", Algorithm::Oracle),
            Err(QueryError::UnsupportedAlgorithm(Algorithm::Oracle))
        );
    }

    #[test]
    fn class_without_statistics_is_not_a_candidate() {
        let kb = KnowledgeBase::build(vec![
            member("o", "S"),
            member("o", "NoStats"),
            stat("T", "S", "0.2", "0.3"),
        ])
        .unwrap();
        let candidates = kb.candidates_for("o", "T");
        assert_eq!(candidates.len(), 1);
        assert_eq!(candidates[0].class, "S");
    }
}
