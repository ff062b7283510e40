//! The program corpus and its verification harness.
//!
//! Records are tab-separated: `name, arity, status, oracle, program,
//! description`. Lines starting with `#` are comments. Rejected rows may use
//! `-` for arity and oracle.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::oracles::OracleId;
use crate::arbator::{arbate, CalcResult};
use crate::machine::Budget;
use crate::numerals::{Nat, Numeral};
use crate::syntax::{classify_number, Classification};

const BUILTIN: &str = include_str!("../../data/corpus.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    PaperVerified,
    PaperCorrected,
    PaperRejected,
    Derived,
}

impl Status {
    pub fn is_rejected(self) -> bool {
        self == Status::PaperRejected
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-verified" => Ok(Status::PaperVerified),
            "paper-corrected" => Ok(Status::PaperCorrected),
            "paper-rejected" => Ok(Status::PaperRejected),
            "derived" => Ok(Status::Derived),
            _ => Err(format!("unknown status `{s}`")),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::PaperVerified => "paper-verified",
            Status::PaperCorrected => "paper-corrected",
            Status::PaperRejected => "paper-rejected",
            Status::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub arity: Option<usize>,
    pub status: Status,
    pub oracle: Option<OracleId>,
    pub program: Numeral,
    /// The program column exactly as written in the file.
    pub text: String,
    pub description: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    index: HashMap<String, usize>,
}

impl Corpus {
    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-rejected entries of arity 1.
    pub fn unary_programs(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(|e| !e.status.is_rejected() && e.arity == Some(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub fn parse_corpus(text: &str) -> Result<Corpus, FormatError> {
    let mut corpus = Corpus::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| FormatError { line: line_no, message };
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(err(format!("expected 6 tab-separated fields, found {}", cols.len())));
        }
        let name = cols[0].trim();
        if name.is_empty() || !name.is_ascii() {
            return Err(err(format!("bad name `{name}`")));
        }
        let status: Status = cols[2].trim().parse().map_err(err)?;
        let dash_ok = status.is_rejected();
        let arity = match cols[1].trim() {
            "-" if dash_ok => None,
            a => Some(a.parse().map_err(|_| err(format!("bad arity `{a}`")))?),
        };
        let oracle = match cols[3].trim() {
            "-" if dash_ok => None,
            o => Some(o.parse::<OracleId>().map_err(|e| err(e.to_string()))?),
        };
        let program = Numeral::parse(cols[4]).map_err(|e| err(format!("bad program: {e}")))?;
        if corpus.index.contains_key(name) {
            return Err(err(format!("duplicate entry `{name}`")));
        }
        corpus.index.insert(name.to_string(), corpus.entries.len());
        corpus.entries.push(CorpusEntry {
            name: name.to_string(),
            arity,
            status,
            oracle,
            program,
            text: cols[4].to_string(),
            description: cols[5].trim().to_string(),
        });
    }
    Ok(corpus)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    Ok(parse_corpus(&std::fs::read_to_string(path)?)?)
}

/// The corpus shipped with the crate.
pub fn builtin_corpus() -> Corpus {
    parse_corpus(BUILTIN).expect("bundled corpus is well formed")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Every grid point where the oracle fits the bit cap agreed.
    Pass { checked: usize, skipped: usize },
    NotPrimitive(Classification),
    Mismatch { inputs: Vec<Nat>, expected: Nat, got: CalcResult },
    /// A rejected row that indeed fails; carries the reason found.
    Rejected(String),
    /// A rejected row that turns out to match its oracle.
    RejectedButPasses,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryReport {
    pub name: String,
    pub status: Status,
    pub outcome: Outcome,
}

impl EntryReport {
    pub fn ok(&self) -> bool {
        matches!(self.outcome, Outcome::Pass { .. } | Outcome::Rejected(_))
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "ok" } else { "FAIL" };
        write!(f, "{verdict}\t{}\t{}\t", self.name, self.status)?;
        match &self.outcome {
            Outcome::Pass { checked, skipped } => write!(f, "{checked} points, {skipped} beyond the bit cap"),
            Outcome::NotPrimitive(c) => write!(f, "not primitive ({c})"),
            Outcome::Mismatch { inputs, expected, got } => {
                let xs: Vec<String> = inputs.iter().map(|x| x.to_string()).collect();
                write!(f, "at ({}) expected {expected}, got {got}", xs.join(","))
            }
            Outcome::Rejected(why) => write!(f, "rejected: {why}"),
            Outcome::RejectedButPasses => f.write_str("rejected row matches its oracle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub entries: Vec<EntryReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(EntryReport::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries.iter().filter(|e| !e.ok())
    }
}

fn grid(arity: usize, unary_max: u64, binary_max: u64) -> Vec<Vec<Nat>> {
    let side = if arity == 1 { unary_max } else { binary_max };
    let mut points = vec![Vec::new()];
    for _ in 0..arity {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=side).map(move |v| {
                    let mut q = p.clone();
                    q.push(Nat::from(v));
                    q
                })
            })
            .collect();
    }
    points
}

fn check(entry: &CorpusEntry, unary_max: u64, binary_max: u64, budget: Budget) -> Outcome {
    let class = classify_number(&entry.program);
    if !class.is_primitive() {
        return Outcome::NotPrimitive(class);
    }
    let (Some(oracle), Some(arity)) = (entry.oracle, entry.arity) else {
        return Outcome::Pass { checked: 0, skipped: 0 };
    };
    let (mut checked, mut skipped) = (0, 0);
    for xs in grid(arity, unary_max, binary_max) {
        let Some(expected) = oracle.eval(&xs, budget.max_value_bits) else {
            skipped += 1;
            continue;
        };
        let got = arbate(&entry.program, &xs, budget);
        if got.value() != Some(&expected) {
            return Outcome::Mismatch { inputs: xs, expected, got };
        }
        checked += 1;
    }
    Outcome::Pass { checked, skipped }
}

/// Checks one entry. Rejected rows pass when they do fail.
pub fn verify_entry(entry: &CorpusEntry, unary_max: u64, binary_max: u64, budget: Budget) -> EntryReport {
    let outcome = match (entry.status.is_rejected(), check(entry, unary_max, binary_max, budget)) {
        (false, o) => o,
        (true, Outcome::NotPrimitive(c)) => Outcome::Rejected(format!("not primitive ({c})")),
        (true, Outcome::Mismatch { inputs, expected, got }) => {
            let xs: Vec<String> = inputs.iter().map(|x| x.to_string()).collect();
            Outcome::Rejected(format!("at ({}) expected {expected}, got {got}", xs.join(",")))
        }
        (true, _) if entry.oracle.is_none() => Outcome::Rejected("no function attached".into()),
        (true, _) => Outcome::RejectedButPasses,
    };
    EntryReport { name: entry.name.clone(), status: entry.status, outcome }
}

/// Verifies every entry on the exhaustive grid: unary inputs `0..=unary_max`,
/// other arities over `0..=binary_max` per coordinate. Entries run on
/// separate threads.
pub fn verify_corpus(corpus: &Corpus, unary_max: u64, binary_max: u64, budget: Budget) -> VerifyReport {
    let entries = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .entries
            .iter()
            .map(|e| s.spawn(move || verify_entry(e, unary_max, binary_max, budget)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread")).collect()
    });
    VerifyReport { entries }
}
