use std::collections::{BTreeSet, HashMap};

use super::parser::{Query, QueryTerm};
use super::RdqlError;
use crate::rdf::{Binding, Graph, PatternTerm, Term, Triple, TriplePattern};

/// Triples grouped by the term in each position.
struct Index<'g> {
    triples: Vec<&'g Triple>,
    by_position: [HashMap<&'g Term, Vec<usize>>; 3],
}

impl<'g> Index<'g> {
    fn new(graph: &'g Graph) -> Self {
        let triples: Vec<&Triple> = graph.iter().collect();
        let mut by_position: [HashMap<&Term, Vec<usize>>; 3] = Default::default();
        for (i, t) in triples.iter().enumerate() {
            for (map, term) in by_position.iter_mut().zip([t.subject(), t.predicate(), t.object()]) {
                map.entry(term).or_default().push(i);
            }
        }
        Index { triples, by_position }
    }

    /// Triples that can match `pattern` under `seed`, narrowed by the most
    /// selective position that is already fixed.
    fn candidates(&self, pattern: &TriplePattern, seed: &Binding) -> Box<dyn Iterator<Item = &'g Triple> + '_> {
        let fixed = pattern.positions().into_iter().enumerate().filter_map(|(i, p)| match p {
            PatternTerm::Term(t) => Some((i, t)),
            PatternTerm::Var(v) => seed.get(v).map(|t| (i, t)),
        });
        let narrowest = fixed
            .map(|(i, t)| self.by_position[i].get(t).map_or(&[][..], Vec::as_slice))
            .min_by_key(|rows| rows.len());
        match narrowest {
            Some(rows) => Box::new(rows.iter().map(|&i| self.triples[i])),
            None => Box::new(self.triples.iter().copied()),
        }
    }
}

fn to_pattern(query: &Query) -> Result<Vec<TriplePattern>, RdqlError> {
    let position = |t: &QueryTerm| -> Result<PatternTerm, RdqlError> {
        Ok(match t {
            QueryTerm::Var(v) => PatternTerm::Var(v.clone()),
            other => PatternTerm::Term(other.resolve(&query.prefixes)?.expect("constant position")),
        })
    };
    query
        .patterns
        .iter()
        .map(|p| Ok(TriplePattern::new(position(&p.subject)?, position(&p.predicate)?, position(&p.object)?)))
        .collect()
}

/// Conjunctive evaluation by left-to-right nested index lookups.
///
/// Results are deduplicated and sorted by the N-Triples form of the bound
/// terms, taken in result-variable order.
pub fn evaluate(query: &Query, graph: &Graph) -> Result<Vec<Binding>, RdqlError> {
    let patterns = to_pattern(query)?;
    let index = Index::new(graph);
    let mut partial = vec![Binding::new()];
    for pattern in &patterns {
        partial = partial
            .iter()
            .flat_map(|seed| index.candidates(pattern, seed).filter_map(move |t| pattern.match_triple(t, seed)))
            .collect();
        if partial.is_empty() {
            break;
        }
    }
    let vars = query.result_variables();
    let unique: BTreeSet<(Vec<String>, Binding)> = partial
        .into_iter()
        .map(|b| {
            let b = b.project(&vars);
            let key = vars.iter().map(|v| b.get(v).map(ToString::to_string).unwrap_or_default()).collect();
            (key, b)
        })
        .collect();
    Ok(unique.into_iter().map(|(_, b)| b).collect())
}
