use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use super::vocab;
use super::{RdfError, Term, Triple};

/// A set of triples with insertion-ordered iteration.
///
/// Cloning is O(1); the first write after a clone copies the underlying set.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Arc<IndexSet<Triple>>,
}

impl PartialEq for Graph {
    /// Set equality, independent of insertion order.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.triples.iter().all(|t| other.contains(t))
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    /// Returns true when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        Arc::make_mut(&mut self.triples).insert(triple)
    }

    /// Value-style insert: returns the new graph state.
    pub fn with(mut self, triple: Triple) -> Self {
        self.insert(triple);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t.clone());
        }
    }

    /// Triples with the given subject and predicate, in insertion order.
    pub fn objects<'a>(&'a self, subject: &'a Term, predicate: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples
            .iter()
            .filter(move |t| t.subject() == subject && t.predicate().as_iri() == Some(predicate))
            .map(Triple::object)
    }

    /// True when `node` is the subject of any reification role triple.
    pub fn is_reification_node(&self, node: &Term) -> bool {
        self.triples.iter().any(|t| {
            t.subject() == node
                && matches!(
                    t.predicate().as_iri(),
                    Some(vocab::RDF_SUBJECT | vocab::RDF_PREDICATE | vocab::RDF_OBJECT)
                )
        })
    }

    /// One binding per triple matching the pattern.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Binding> {
        self.triples.iter().filter_map(|t| pattern.match_triple(t, &Binding::new())).collect()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = indexmap::set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// Variable assignment produced by pattern matching and query evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding(BTreeMap<String, Term>);

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, term: Term) {
        self.0.insert(var.into(), term);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.0.values()
    }

    /// Restricts the binding to `vars`; unknown names are skipped.
    pub fn project(&self, vars: &[String]) -> Binding {
        Binding(vars.iter().filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone()))).collect())
    }
}

impl std::ops::Index<&str> for Binding {
    type Output = Term;

    fn index(&self, var: &str) -> &Term {
        &self.0[var]
    }
}

impl FromIterator<(String, Term)> for Binding {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Term(Term),
    /// Variable name without the leading `?`.
    Var(String),
}

impl PatternTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PatternTerm::Var(name.into())
    }

    fn unify(&self, term: &Term, binding: &mut Binding) -> bool {
        match self {
            PatternTerm::Term(t) => t == term,
            PatternTerm::Var(v) => match binding.get(v) {
                Some(bound) => bound == term,
                None => {
                    binding.insert(v.clone(), term.clone());
                    true
                }
            },
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => t.fmt(f),
            PatternTerm::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: impl Into<PatternTerm>, predicate: impl Into<PatternTerm>, object: impl Into<PatternTerm>) -> Self {
        TriplePattern { subject: subject.into(), predicate: predicate.into(), object: object.into() }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    /// Variable names in position order, repeats included.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.positions().into_iter().filter_map(|p| match p {
            PatternTerm::Var(v) => Some(v.as_str()),
            PatternTerm::Term(_) => None,
        })
    }

    /// Extends `seed` so that the pattern equals `triple`, if possible.
    pub fn match_triple(&self, triple: &Triple, seed: &Binding) -> Option<Binding> {
        let mut binding = seed.clone();
        let ok = self.subject.unify(triple.subject(), &mut binding)
            && self.predicate.unify(triple.predicate(), &mut binding)
            && self.object.unify(triple.object(), &mut binding);
        ok.then_some(binding)
    }
}

/// The four standard reification triples describing `statement` under `node`.
pub fn reify(statement: &Triple, node: &Term) -> Result<[Triple; 4], RdfError> {
    if node.is_literal() {
        return Err(RdfError::InvalidTriple(format!("reification node must be an IRI or blank node: {node}")));
    }
    let iri = |s: &str| Term::Iri(s.to_owned());
    Ok([
        Triple::new(node.clone(), iri(vocab::RDF_TYPE), iri(vocab::RDF_STATEMENT))?,
        Triple::new(node.clone(), iri(vocab::RDF_SUBJECT), statement.subject().clone())?,
        Triple::new(node.clone(), iri(vocab::RDF_PREDICATE), statement.predicate().clone())?,
        Triple::new(node.clone(), iri(vocab::RDF_OBJECT), statement.object().clone())?,
    ])
}

/// Reconstructs the statement reified under `node`.
pub fn unreify(graph: &Graph, node: &Term) -> Result<Triple, RdfError> {
    let role = |predicate: &str, name: &str| -> Result<Term, RdfError> {
        let mut values = graph.objects(node, predicate);
        let first = values.next().ok_or_else(|| RdfError::IncompleteReification {
            node: node.to_string(),
            reason: format!("missing rdf:{name}"),
        })?;
        if values.any(|v| v != first) {
            return Err(RdfError::IncompleteReification {
                node: node.to_string(),
                reason: format!("conflicting rdf:{name} values"),
            });
        }
        Ok(first.clone())
    };
    let subject = role(vocab::RDF_SUBJECT, "subject")?;
    let predicate = role(vocab::RDF_PREDICATE, "predicate")?;
    let object = role(vocab::RDF_OBJECT, "object")?;
    Triple::new(subject, predicate, object)
}
