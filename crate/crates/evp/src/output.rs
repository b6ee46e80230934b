// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Output records shared by the CLI commands.
//!
//! One record per query, rendered either as human-readable text (first line
//! is always the answer interval) or as a single JSON line. Field order and
//! list ordering are fixed, so identical inputs produce byte-identical
//! output.

use serde::Serialize;

use evidential::{IterationTrace, QueryResult, ResolutionResult};

#[derive(Serialize)]
#[serde(untagged)]
pub enum QueryField {
    Raw(&'static str),
    Pair { object: String, target: String },
}

impl QueryField {
    pub fn raw() -> Self {
        QueryField::Raw("raw")
    }
}

#[derive(Serialize)]
pub struct TrackedRecord {
    pub interval: String,
    pub constituents: Vec<usize>,
    pub marked: bool,
}

#[derive(Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub generated: Vec<TrackedRecord>,
    pub surviving: Vec<TrackedRecord>,
}

#[derive(Serialize)]
pub struct OutputRecord {
    pub query: QueryField,
    pub algorithm: String,
    pub interval: String,
    pub status: String,
    pub reference_classes: Vec<String>,
    pub dropped_by_dominance: Vec<String>,
    pub constituents: Vec<usize>,
    pub trace: Option<Vec<TraceRecord>>,
    /// Constituent intervals in display form, used only by the text
    /// renderer for raw resolve output.
    #[serde(skip)]
    pub constituent_intervals: Vec<String>,
}

fn trace_records(trace: &[IterationTrace]) -> Vec<TraceRecord> {
    trace
        .iter()
        .map(|pass| TraceRecord {
            iteration: pass.iteration,
            generated: pass
                .generated
                .iter()
                .map(|t| TrackedRecord {
                    interval: t.interval.to_string(),
                    constituents: t.constituents.iter().copied().collect(),
                    marked: t.marked,
                })
                .collect(),
            surviving: pass
                .surviving
                .iter()
                .map(|t| TrackedRecord {
                    interval: t.interval.to_string(),
                    constituents: t.constituents.iter().copied().collect(),
                    marked: t.marked,
                })
                .collect(),
        })
        .collect()
}

impl OutputRecord {
    pub fn for_query(
        object: &str,
        target: &str,
        algorithm: &str,
        result: &QueryResult,
        with_trace: bool,
    ) -> Self {
        OutputRecord {
            query: QueryField::Pair { object: object.to_string(), target: target.to_string() },
            algorithm: algorithm.to_string(),
            interval: result.interval.to_string(),
            status: result.status.tag().to_string(),
            reference_classes: result.reference_classes.iter().cloned().collect(),
            dropped_by_dominance: result.dropped_by_dominance.iter().cloned().collect(),
            constituents: result
                .resolution
                .as_ref()
                .map(|r| r.constituents.iter().copied().collect())
                .unwrap_or_default(),
            trace: match (&result.resolution, with_trace) {
                (Some(resolution), true) => Some(trace_records(&resolution.trace)),
                _ => None,
            },
            constituent_intervals: Vec::new(),
        }
    }

    pub fn for_resolve(
        inputs: &[evidential::Interval],
        result: &ResolutionResult,
        with_trace: bool,
    ) -> Self {
        OutputRecord {
            query: QueryField::raw(),
            algorithm: result.algorithm.tag().to_string(),
            interval: result.interval.to_string(),
            status: "resolved".to_string(),
            reference_classes: Vec::new(),
            dropped_by_dominance: Vec::new(),
            constituents: result.constituents.iter().copied().collect(),
            trace: with_trace.then(|| trace_records(&result.trace)),
            constituent_intervals: result
                .constituents
                .iter()
                .map(|&i| inputs[i].to_string())
                .collect(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.interval);
        out.push('\n');
        out.push_str(&format!("status: {}\n", self.status));
        out.push_str(&format!("algorithm: {}\n", self.algorithm));
        if !self.reference_classes.is_empty() {
            out.push_str(&format!("reference_classes: {}\n", self.reference_classes.join(" ")));
        }
        if !self.dropped_by_dominance.is_empty() {
            out.push_str(&format!(
                "dropped_by_dominance: {}\n",
                self.dropped_by_dominance.join(" ")
            ));
        }
        if !self.constituent_intervals.is_empty() {
            out.push_str(&format!("constituents: {}\n", self.constituent_intervals.join(" ")));
        }
        if let Some(trace) = &self.trace {
            out.push_str("trace:\n");
            for pass in trace {
                out.push_str(&format!("  pass {}:\n", pass.iteration));
                out.push_str(&format!("    generated: {}\n", render_line(&pass.generated)));
                out.push_str(&format!("    surviving: {}\n", render_line(&pass.surviving)));
            }
        }
        out
    }
}

/// Intervals on one line; `*` flags marked entries.
fn render_line(entries: &[TrackedRecord]) -> String {
    if entries.is_empty() {
        return "(none)".to_string();
    }
    entries
        .iter()
        .map(|t| if t.marked { format!("{}*", t.interval) } else { t.interval.clone() })
        .collect::<Vec<_>>()
        .join(" ")
}
