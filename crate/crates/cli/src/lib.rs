//! Input language, task runner and test corpus behind the `phscalc` binary.

pub mod corpus;
pub mod document;
pub mod exec;
pub mod lexer;
pub mod parser;

pub use document::{Document, PairDecl, PairDivisor, Task};
pub use parser::{parse, parse_poly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, col {col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, col {col}: undeclared symbol {name}")]
    Undeclared { line: usize, col: usize, name: String },
}

impl ParseError {
    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line, col, msg: msg.into() }
    }

    pub fn undeclared(line: usize, col: usize, name: impl Into<String>) -> Self {
        ParseError::Undeclared { line, col, name: name.into() }
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Undeclared { line, col, .. } => (*line, *col),
        }
    }
}
