//! Line-oriented pulse-sequence DSL.
//!
//! Experiments are text files instead of code. The grammar, with one
//! statement or setting per line (newlines are insignificant; `#` starts a
//! comment):
//!
//! ```text
//! sequence := (setting | stmt)*
//! setting  := "set" identifier "=" number
//! stmt     := "pulse" axis (angle | "for" time)
//!           | "wait" time
//!           | "readout" ("on" | "off")
//!           | "measure"
//! angle    := number ("deg" | "rad")
//! time     := number ("ns" | "us" | "s")
//! ```
//!
//! The only axis is `x`. Angles are normalized to radians and times to
//! seconds in the parsed document; the canonical serializer prints `deg` and
//! `ns` with at most six significant digits, and `parse ∘ serialize` is the
//! identity on documents. Settings override device parameters at lowering
//! time and carry their unit in the key name (`set delta_omega_mhz = 150`).

mod lexer;
mod lower;
mod parser;

pub use lexer::{tokenize, Token, TokenKind};
pub use lower::{lower, doc_from_schedule, OVERRIDE_KEYS};
pub use parser::parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::harness::sweep::format_sig;

/// Positioned parse or lowering diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column.
    pub col: usize,
    pub message: String,
    /// Token kinds that would have been accepted, when known.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { line, col, message: message.into(), expected: Vec::new() }
    }

    pub fn expecting(mut self, expected: &[&str]) -> Self {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" | "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// One statement of a sequence document.
#[derive(Debug, Clone, Copy)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Source position of the statement's first token; synthetic for
    /// documents built from schedules. Not part of structural equality.
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StmtKind {
    /// `pulse x <angle>`, radians.
    PulseAngle { angle: f64 },
    /// `pulse x for <time>`, seconds; converted to an angle via Ω when lowered.
    PulseDuration { duration: f64 },
    /// `wait <time>`, seconds.
    Wait { duration: f64 },
    /// `readout on` / `readout off`.
    Readout { on: bool },
    /// `measure`.
    Measure,
}

/// Parsed sequence document: device overrides plus ordered statements.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SequenceDoc {
    pub settings: BTreeMap<String, f64>,
    pub statements: Vec<Stmt>,
}

impl SequenceDoc {
    pub fn push(&mut self, kind: StmtKind) {
        let line = self.statements.len() + self.settings.len() + 1;
        self.statements.push(Stmt { kind, line, col: 1 });
    }
}

/// Canonical text form: settings first (key-sorted), one statement per line,
/// `deg`/`ns` units, at most six significant digits.
pub fn serialize(doc: &SequenceDoc) -> String {
    let mut out = String::new();
    for (key, value) in &doc.settings {
        out.push_str(&format!("set {key} = {}\n", format_sig(*value, 6)));
    }
    for stmt in &doc.statements {
        match stmt.kind {
            StmtKind::PulseAngle { angle } => {
                out.push_str(&format!("pulse x {}deg\n", format_sig(angle.to_degrees(), 6)));
            }
            StmtKind::PulseDuration { duration } => {
                out.push_str(&format!("pulse x for {}ns\n", format_sig(duration * 1e9, 6)));
            }
            StmtKind::Wait { duration } => {
                out.push_str(&format!("wait {}ns\n", format_sig(duration * 1e9, 6)));
            }
            StmtKind::Readout { on } => {
                out.push_str(if on { "readout on\n" } else { "readout off\n" });
            }
            StmtKind::Measure => out.push_str("measure\n"),
        }
    }
    out
}
