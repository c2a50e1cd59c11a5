//! The surface language: parsing, staging elaboration to towers, sessions,
//! the REPL and batch evaluation.

pub mod ast;
pub mod elab;
pub mod lexer;
pub mod parser;
pub mod session;

use std::fmt;

pub use parser::{parse_expr, parse_item, parse_program};
pub use session::{Config, Eps, Evaluation, Reply, Session, PRELUDE};

/// Syntax error with its position and the tokens that would have been accepted.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: expected ", self.line, self.col)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, "; found {}", self.found)
    }
}

/// Scope, shape or arity error found while elaborating.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("elaboration error: {0}")]
pub struct ElabError(pub String);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error("error: {0}")]
    Io(String),
}

#[cfg(test)]
mod tests;
