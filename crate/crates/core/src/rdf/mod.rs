//! RDF triple model: terms, triples, graphs, reification, N-Triples.
//!
//! Every layer above speaks in terms of this module. Graphs are cheap to
//! clone (copy-on-write) so a snapshot can be shared between readers while a
//! writer builds the next state.

mod graph;
pub mod ntriples;
mod term;
pub mod vocab;

pub use graph::{reify, unreify, Binding, Graph, PatternTerm, TriplePattern};
pub use term::{Term, Triple};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("incomplete reification for {node}: {reason}")]
    IncompleteReification { node: String, reason: String },
}
