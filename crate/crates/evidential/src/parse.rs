// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented knowledge-base DSL.
//!
//! One statement per line; `#` starts a comment, blank lines are ignored,
//! identifiers match `[A-Za-z_][A-Za-z0-9_]*`:
//!
//! ```text
//! member <object> <class>                object is an element of class
//! subset <subclass> <superclass>         strict subclass relation
//! stat <target> <class> [<num>, <num>]   proportion statement
//! query <object> <target>                embedded query
//! ```
//!
//! Numbers are decimal literals (at most nine fractional digits) or
//! fractions `a/b`. The parser collects every error it can find in one pass
//! instead of stopping at the first, and warns about duplicate identical
//! statements. [`serialize_kb`] writes statements back in canonical order so
//! that parse-serialize-parse is a fixpoint.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::interval::Interval;
use crate::kb::{KbError, KnowledgeBase, Statement};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub offending_text: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// An embedded `query <object> <target>` line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Query {
    pub object: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedKb {
    pub kb: KnowledgeBase,
    /// Embedded queries in file order, duplicates removed.
    pub queries: Vec<Query>,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    column: usize,
    byte_start: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut result = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    let mut end_byte = 0;
    for (byte_idx, ch) in line.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((col, byte_start)) = start.take() {
                result.push(Token { column: col, byte_start, text: &line[byte_start..byte_idx] });
            }
        } else if start.is_none() {
            start = Some((column, byte_idx));
        }
        end_byte = byte_idx + ch.len_utf8();
    }
    if let Some((col, byte_start)) = start {
        result.push(Token { column: col, byte_start, text: &line[byte_start..end_byte] });
    }
    result
}

fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn error(line: usize, column: usize, message: impl Into<String>, offending: &str) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
        offending_text: offending.to_string(),
    }
}

fn expect_identifier(token: &Token<'_>, line: usize) -> Result<String, ParseError> {
    if is_identifier(token.text) {
        Ok(token.text.to_string())
    } else {
        Err(error(line, token.column, format!("invalid identifier `{}`", token.text), token.text))
    }
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Parses `[lower, upper]` out of `text`, which begins at column `base_col`
/// of the source line. Trailing non-blank text is an error.
fn parse_interval_at(text: &str, line: usize, base_col: usize) -> Result<Interval, ParseError> {
    let after_ws = text.trim_start();
    let bracket_col = base_col + char_len(text) - char_len(after_ws);
    let Some(body_and_rest) = after_ws.strip_prefix('[') else {
        return Err(error(line, bracket_col, "expected interval like [0.3, 0.7]", after_ws));
    };
    let Some(close_idx) = body_and_rest.find(']') else {
        return Err(error(line, bracket_col, "expected ']'", after_ws));
    };
    let body = &body_and_rest[..close_idx];
    let rest = &body_and_rest[close_idx + 1..];
    if !rest.trim().is_empty() {
        let rest_col = bracket_col + 1 + char_len(body) + 1 + (char_len(rest) - char_len(rest.trim_start()));
        return Err(error(line, rest_col, "unexpected text after interval", rest.trim()));
    }
    let Some((lower_text, upper_text)) = body.split_once(',') else {
        return Err(error(line, bracket_col, "expected ',' between endpoints", after_ws));
    };

    let lower_col = bracket_col + 1 + (char_len(lower_text) - char_len(lower_text.trim_start()));
    let upper_col =
        bracket_col + 1 + char_len(lower_text) + 1 + (char_len(upper_text) - char_len(upper_text.trim_start()));

    let lower: Rational = lower_text
        .trim()
        .parse()
        .map_err(|e| error(line, lower_col, format!("{e}"), lower_text.trim()))?;
    let upper: Rational = upper_text
        .trim()
        .parse()
        .map_err(|e| error(line, upper_col, format!("{e}"), upper_text.trim()))?;

    if lower > Rational::one() {
        return Err(error(line, lower_col, "interval endpoint out of [0, 1]", lower_text.trim()));
    }
    if upper > Rational::one() {
        return Err(error(line, upper_col, "interval endpoint out of [0, 1]", upper_text.trim()));
    }
    if lower > upper {
        return Err(error(line, bracket_col, "lower exceeds upper", after_ws.trim()));
    }
    Interval::new(lower, upper)
        .map_err(|e| error(line, bracket_col, e.to_string(), after_ws.trim()))
}

enum Parsed {
    Statement(Statement),
    Query(Query),
}

fn parse_line(line_no: usize, line: &str) -> Option<Result<Parsed, ParseError>> {
    let toks = tokens(line);
    let first = toks.first()?;

    let arity = |expected: usize, usage: &str| -> Result<(), ParseError> {
        if toks.len() < expected {
            Err(error(line_no, first.column, format!("expected `{usage}`"), line.trim()))
        } else if toks.len() > expected {
            let extra = &toks[expected];
            Err(error(line_no, extra.column, format!("unexpected token `{}`", extra.text), extra.text))
        } else {
            Ok(())
        }
    };

    let result = match first.text {
        "member" => arity(3, "member <object> <class>").and_then(|()| {
            let object = expect_identifier(&toks[1], line_no)?;
            let class = expect_identifier(&toks[2], line_no)?;
            Ok(Parsed::Statement(Statement::Membership { object, class }))
        }),
        "subset" => arity(3, "subset <subclass> <superclass>").and_then(|()| {
            let sub = expect_identifier(&toks[1], line_no)?;
            let sup = expect_identifier(&toks[2], line_no)?;
            if sub == sup {
                return Err(error(
                    line_no,
                    toks[2].column,
                    "class cannot be a strict subset of itself",
                    toks[2].text,
                ));
            }
            Ok(Parsed::Statement(Statement::Subset { sub, sup }))
        }),
        "stat" => {
            if toks.len() < 4 {
                Err(error(
                    line_no,
                    first.column,
                    "expected `stat <target> <class> [<num>, <num>]`",
                    line.trim(),
                ))
            } else {
                (|| {
                    let target = expect_identifier(&toks[1], line_no)?;
                    let class = expect_identifier(&toks[2], line_no)?;
                    let remainder = &line[toks[3].byte_start..];
                    let interval = parse_interval_at(remainder, line_no, toks[3].column)?;
                    Ok(Parsed::Statement(Statement::Proportion { target, class, interval }))
                })()
            }
        }
        "query" => arity(3, "query <object> <target>").and_then(|()| {
            let object = expect_identifier(&toks[1], line_no)?;
            let target = expect_identifier(&toks[2], line_no)?;
            Ok(Parsed::Query(Query { object, target }))
        }),
        other => Err(error(
            line_no,
            first.column,
            format!("unknown keyword `{other}` (expected member, subset, stat, or query)"),
            other,
        )),
    };
    Some(result)
}

/// Strips a trailing carriage return and a `#` comment.
fn effective_content(raw: &str) -> &str {
    let line = raw.strip_suffix('\r').unwrap_or(raw);
    line.split('#').next().unwrap_or("")
}

/// Parses a whole knowledge-base file. All syntax and semantic errors are
/// collected in one pass; on success the built knowledge base is returned
/// together with embedded queries and duplicate-statement warnings.
pub fn parse_kb(source: &str) -> Result<ParsedKb, Vec<ParseError>> {
    let mut errors: Vec<ParseError> = Vec::new();
    let mut warnings: Vec<ParseWarning> = Vec::new();
    let mut statements: Vec<(usize, Statement)> = Vec::new();
    let mut queries: Vec<Query> = Vec::new();
    let mut first_statement: BTreeMap<Statement, usize> = BTreeMap::new();
    let mut first_query: BTreeMap<Query, usize> = BTreeMap::new();
    let mut proportion_lines: BTreeMap<(String, String), (usize, Interval)> = BTreeMap::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = effective_content(raw);
        match parse_line(line_no, line) {
            None => {}
            Some(Err(e)) => errors.push(e),
            Some(Ok(Parsed::Statement(statement))) => {
                if let Some(first) = first_statement.get(&statement) {
                    warnings.push(ParseWarning {
                        line: line_no,
                        message: format!("duplicate statement (first at line {first})"),
                    });
                    continue;
                }
                if let Statement::Proportion { target, class, interval } = &statement {
                    let key = (target.clone(), class.clone());
                    if let Some((_, existing)) = proportion_lines.get(&key) {
                        if existing != interval {
                            errors.push(error(
                                line_no,
                                1,
                                KbError::DuplicateProportion {
                                    target: target.clone(),
                                    class: class.clone(),
                                }
                                .to_string(),
                                line.trim(),
                            ));
                            continue;
                        }
                    } else {
                        proportion_lines.insert(key, (line_no, *interval));
                    }
                }
                first_statement.insert(statement.clone(), line_no);
                statements.push((line_no, statement));
            }
            Some(Ok(Parsed::Query(query))) => {
                if let Some(first) = first_query.get(&query) {
                    warnings.push(ParseWarning {
                        line: line_no,
                        message: format!("duplicate query (first at line {first})"),
                    });
                } else {
                    first_query.insert(query.clone(), line_no);
                    queries.push(query);
                }
            }
        }
    }

    if !errors.is_empty() {
        errors.sort_by_key(|e| (e.line, e.column));
        return Err(errors);
    }

    match KnowledgeBase::build(statements.iter().map(|(_, s)| s.clone()).collect()) {
        Ok(kb) => Ok(ParsedKb { kb, queries, warnings }),
        Err(kb_errors) => {
            for kb_error in kb_errors {
                let line = match &kb_error {
                    KbError::SubsetCycle { classes } => statements
                        .iter()
                        .find(|(_, s)| {
                            matches!(s, Statement::Subset { sub, .. } if classes.contains(sub))
                        })
                        .map(|(line, _)| *line)
                        .unwrap_or(1),
                    KbError::DuplicateProportion { target, class } => proportion_lines
                        .get(&(target.clone(), class.clone()))
                        .map(|(line, _)| *line)
                        .unwrap_or(1),
                };
                errors.push(error(line, 1, kb_error.to_string(), ""));
            }
            errors.sort_by_key(|e| (e.line, e.column));
            Err(errors)
        }
    }
}

/// Parses whitespace-separated interval literals such as
/// `[0.3,0.4] [0.0,0.5]`. Errors are collected per literal.
pub fn parse_interval_list(source: &str) -> Result<Vec<Interval>, Vec<ParseError>> {
    let mut intervals = Vec::new();
    let mut errors = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut pos = 0;
        while pos < chars.len() {
            if chars[pos].1.is_whitespace() {
                pos += 1;
                continue;
            }
            let column = pos + 1;
            if chars[pos].1 != '[' {
                let end = (pos..chars.len())
                    .find(|&i| chars[i].1.is_whitespace() || chars[i].1 == '[')
                    .unwrap_or(chars.len());
                let text = &line[chars[pos].0..chars.get(end).map_or(line.len(), |c| c.0)];
                errors.push(error(line_no, column, "expected interval like [0.3, 0.7]", text));
                pos = end;
                continue;
            }
            match (pos..chars.len()).find(|&i| chars[i].1 == ']') {
                None => {
                    errors.push(error(line_no, column, "expected ']'", &line[chars[pos].0..]));
                    pos = chars.len();
                }
                Some(close) => {
                    let byte_end = chars[close].0 + 1;
                    let text = &line[chars[pos].0..byte_end];
                    match parse_interval_at(text, line_no, column) {
                        Ok(interval) => intervals.push(interval),
                        Err(e) => errors.push(e),
                    }
                    pos = close + 1;
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(intervals)
    } else {
        Err(errors)
    }
}

/// Writes the knowledge base back out, one statement per line, in canonical
/// order (memberships, then subsets, then proportions, each sorted).
/// Parsing the output reconstructs an equal knowledge base.
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for statement in kb.statements() {
        match statement {
            Statement::Membership { object, class } => {
                out.push_str(&format!("member {object} {class}\n"));
            }
            Statement::Subset { sub, sup } => {
                out.push_str(&format!("subset {sub} {sup}\n"));
            }
            Statement::Proportion { target, class, interval } => {
                out.push_str(&format!("stat {target} {class} {interval}\n"));
            }
        }
    }
    out
}
