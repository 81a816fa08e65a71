//! The text format: lexing, parsing and canonical printing.
//!
//! ```text
//! # the walking arrow
//! category two {
//!   objects: a, b;
//!   arrows: u: a -> b;
//! }
//! ```

pub mod ast;
mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::Serialize;

pub use parser::parse_blocks;
pub use printer::{print_block, print_blocks, quote};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticKind {
    Syntax,
    Validation,
}

/// A positioned error in an input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn syntax(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { kind: DiagnosticKind::Syntax, span, message: message.into() }
    }

    pub fn validation(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { kind: DiagnosticKind::Validation, span, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Validation => "validation error",
        };
        write!(f, "{}: {kind}: {}", self.span, self.message)
    }
}

impl std::error::Error for Diagnostic {}
