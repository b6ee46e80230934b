// Copyright (c) The evidential Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for reference-class probability interval queries.
//!
//! Exit codes: 0 success, 2 input or parse failure, 3 resolution-domain
//! failure (for example an empty interval list).

mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use evidential::parse::{parse_interval_list, parse_kb, ParseError, ParsedKb};
use evidential::{resolve, Algorithm, Interval};
use output::OutputRecord;

const EXIT_INPUT: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "evp",
    version,
    about = "Probability intervals from reference-class statistics",
    long_about = "Loads knowledge bases of membership, subset, and interval-valued \
                  proportion statements, selects the candidate reference classes for a \
                  query, and combines conflicting interval evidence into a single \
                  probability interval."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgChoice {
    /// Accumulative covers; marked intervals keep interfering.
    #[value(name = "alg1")]
    Alg1,
    /// Covers with deletion of marked intervals each pass.
    #[value(name = "alg2")]
    Alg2,
    /// Width-ascending selection; cover of the kept intervals.
    #[value(name = "alg2prime")]
    Alg2Prime,
}

impl From<AlgChoice> for Algorithm {
    fn from(choice: AlgChoice) -> Algorithm {
        match choice {
            AlgChoice::Alg1 => Algorithm::Alg1,
            AlgChoice::Alg2 => Algorithm::Alg2,
            AlgChoice::Alg2Prime => Algorithm::Alg2Prime,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Answer a query against a knowledge-base file.
    Query {
        /// Knowledge-base file.
        kb_path: PathBuf,
        /// Queried object.
        object: String,
        /// Target property.
        target: String,
        /// Resolution algorithm for conflicting candidates.
        #[arg(long, value_enum, default_value = "alg2prime")]
        alg: AlgChoice,
        /// Include the per-pass resolution trace.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Resolve a raw whitespace-separated list of intervals.
    Resolve {
        /// Interval list such as "[0.3,0.4] [0.0,0.5]", or "-" for stdin.
        intervals: String,
        #[arg(long, value_enum, default_value = "alg2prime")]
        alg: AlgChoice,
        /// Include the per-pass resolution trace.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Validate a knowledge-base file and list candidates for its queries.
    Check {
        /// Knowledge-base file.
        kb_path: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Query { kb_path, object, target, alg, trace, format } => {
            cmd_query(&kb_path, &object, &target, alg, trace, format)
        }
        Command::Resolve { intervals, alg, trace, format } => {
            cmd_resolve(&intervals, alg, trace, format)
        }
        Command::Check { kb_path } => cmd_check(&kb_path),
    };
    ExitCode::from(code)
}

fn read_source(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|err| {
        eprintln!("evp: error: cannot read {}: {}", path.display(), err);
        EXIT_INPUT
    })
}

fn print_parse_errors(label: &str, errors: &[ParseError]) {
    for err in errors {
        eprintln!("{label}:{err}");
    }
}

fn load_kb(path: &Path) -> Result<ParsedKb, u8> {
    let source = read_source(path)?;
    parse_kb(&source).map_err(|errors| {
        print_parse_errors(&path.display().to_string(), &errors);
        EXIT_INPUT
    })
}

fn emit(record: &OutputRecord, format: Format) {
    match format {
        Format::Text => print!("{}", record.to_text()),
        Format::Json => println!("{}", record.to_json_line()),
    }
}

fn cmd_query(
    kb_path: &Path,
    object: &str,
    target: &str,
    alg: AlgChoice,
    trace: bool,
    format: Format,
) -> u8 {
    let parsed = match load_kb(kb_path) {
        Ok(parsed) => parsed,
        Err(code) => return code,
    };
    let algorithm: Algorithm = alg.into();
    let result = match parsed.kb.answer_query(object, target, algorithm) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("evp: error: {err}");
            return EXIT_DOMAIN;
        }
    };
    let record = OutputRecord::for_query(object, target, algorithm.tag(), &result, trace);
    emit(&record, format);
    0
}

fn cmd_resolve(intervals_arg: &str, alg: AlgChoice, trace: bool, format: Format) -> u8 {
    let (label, source) = if intervals_arg == "-" {
        let mut buffer = String::new();
        if let Err(err) = std::io::stdin().read_to_string(&mut buffer) {
            eprintln!("evp: error: cannot read stdin: {err}");
            return EXIT_INPUT;
        }
        ("<stdin>", buffer)
    } else {
        ("<intervals>", intervals_arg.to_string())
    };

    let inputs: Vec<Interval> = match parse_interval_list(&source) {
        Ok(inputs) => inputs,
        Err(errors) => {
            print_parse_errors(label, &errors);
            return EXIT_INPUT;
        }
    };
    let result = match resolve(&inputs, alg.into()) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("evp: error: {err}");
            return EXIT_DOMAIN;
        }
    };
    let record = OutputRecord::for_resolve(&inputs, &result, trace);
    emit(&record, format);
    0
}

fn cmd_check(kb_path: &Path) -> u8 {
    let parsed = match load_kb(kb_path) {
        Ok(parsed) => parsed,
        Err(code) => return code,
    };
    for warning in &parsed.warnings {
        eprintln!("{}:{warning}", kb_path.display());
    }
    if parsed.queries.is_empty() {
        println!("OK");
        return 0;
    }
    for query in &parsed.queries {
        let candidates = parsed.kb.candidates_for(&query.object, &query.target);
        println!(
            "OK, {} candidates for ({}, {})",
            candidates.len(),
            query.object,
            query.target
        );
        for candidate in candidates {
            println!("  {} {}", candidate.class, candidate.interval);
        }
    }
    0
}
