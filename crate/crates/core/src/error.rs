use std::fmt;

use thiserror::Error;

use crate::logic::Formula;

/// A syntax error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(column: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: 1,
            column,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize, offset: usize) -> SyntaxError {
        self.line = line;
        self.column += offset;
        self
    }
}

impl std::error::Error for SyntaxError {}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(#[from] SyntaxError),

    #[error("duplicate rule id `{id}` on line {line}")]
    DuplicateRule { id: String, line: usize },

    #[error("hypothesis `{0}` is already a fact")]
    HypothesisIsFact(Formula),

    #[error("theories share atoms: {0}")]
    OverlappingAtoms(String),

    #[error("extension enumeration exceeded {cap} labelling steps")]
    EnumerationCap { cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
