//! A small RDQL: `SELECT … WHERE (s, p, o), … USING prefix FOR <ns>, …`.
//!
//! Only conjunctive triple patterns are supported. Qualified names may be
//! written bare (`rdf:type`) or inside angle brackets (`<rdf:type>`); both
//! stay unresolved until evaluation.

mod eval;
mod lexer;
mod parser;

pub use eval::evaluate;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_query, Projection, Query, QueryPattern, QueryTerm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdqlError {
    #[error("lex error at offset {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("undeclared prefix `{0}`")]
    UndeclaredPrefix(String),
    #[error("invalid term in query: {0}")]
    InvalidTerm(String),
}
