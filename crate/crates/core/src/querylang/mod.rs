//! A small textual language for probability queries.
//!
//! ```text
//! @regime(i1) @r(1/50) let A = E.f & Y.f; P(A | E.fN + Y.fN)
//! ```
//!
//! Atoms are `E.<d>` / `Y.<d>` with `<d>` one of `m f fN f!N mN m!N N !N`.
//! `!` is negation, `&` conjunction, `+` disjunction (tightest first); `|`
//! is reserved for the conditioning bar. Query forms are `P(e)`,
//! `P(e | e)`, `odds(a : c | b)`, `bf(a : c | b)`, `chain(atom, ...)` and
//! `table`. Directives `@regime(i0|i1|i2)`, `@r(p/q)` and `@named(f|m)`
//! pick the model; the regime defaults to `i2`.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{Binding, Expr, Query, QueryKind};
pub use eval::{evaluate, EvalError, Evaluation, Trace};
pub use parser::{parse, parse_event};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Byte range `start..end` into the query text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Lexical,
    UnbalancedParens,
    UnknownAtom,
    DuplicateBar,
    UnresolvedLabel,
    DuplicateLabel,
    BadDirective,
    Unexpected,
    TooDeep,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }

    /// The input with a caret line under the offending span.
    pub fn annotate(&self, input: &str) -> String {
        let start = input[..self.span.start.min(input.len())].chars().count();
        let width = input
            .get(self.span.start..self.span.end)
            .map_or(1, |s| s.chars().count().max(1));
        format!("{input}\n{}{}", " ".repeat(start), "^".repeat(width))
    }
}

/// Canonical text of a query; `parse(&format(q)) == q`.
pub fn format(q: &Query) -> String {
    q.to_string()
}
