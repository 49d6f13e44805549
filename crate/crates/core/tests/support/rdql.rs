//! Small-universe graphs and queries plus an exhaustive evaluator.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use semlink::rdf::{Binding, Graph, Term, Triple};
use semlink::rdql::{Query, QueryTerm};

pub const NS: &str = "http://e.org/";

#[derive(Debug, Clone)]
pub enum Pos {
    Var(&'static str),
    Const(Term),
}

pub fn universe_iri() -> impl Strategy<Value = Term> {
    prop::sample::select(vec!["a", "b", "c", "p", "q"]).prop_map(|s| Term::Iri(format!("{NS}{s}")))
}

pub fn universe_object() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => universe_iri(),
        1 => Just(Term::literal("l")),
        1 => Just(Term::lang_literal("l", "en")),
        1 => Just(Term::Blank("x".into())),
    ]
}

pub fn graph_strategy() -> impl Strategy<Value = Graph> {
    let subject = prop_oneof![4 => universe_iri(), 1 => Just(Term::Blank("x".into()))];
    prop::collection::vec((subject, universe_iri(), universe_object()), 0..=30)
        .prop_map(|ts| ts.into_iter().map(|(s, p, o)| Triple::new(s, p, o).unwrap()).collect())
}

pub fn pos_strategy() -> impl Strategy<Value = Pos> {
    prop_oneof![
        3 => prop::sample::select(vec!["x", "y", "z"]).prop_map(Pos::Var),
        2 => universe_object().prop_map(Pos::Const),
        1 => Just(Pos::Const(Term::Iri(format!("{NS}absent")))),
    ]
}

pub fn render(pos: &Pos, qname: bool) -> String {
    match pos {
        Pos::Var(v) => format!("?{v}"),
        Pos::Const(Term::Iri(i)) if qname => format!("<e:{}>", &i[NS.len()..]),
        Pos::Const(t @ Term::Iri(_)) => t.to_string(),
        Pos::Const(Term::Literal { value, language: Some(l) }) => format!("\"{value}\"@{l}"),
        Pos::Const(Term::Literal { value, language: None }) => format!("'{value}'"),
        // blank nodes cannot be written in queries; use a variable instead
        Pos::Const(Term::Blank(_)) => "?z".to_owned(),
    }
}

pub fn query_strategy() -> impl Strategy<Value = (String, Vec<[Pos; 3]>)> {
    (prop::collection::vec([pos_strategy(), pos_strategy(), pos_strategy()], 1..=3), any::<bool>(), any::<u8>())
        .prop_map(|(patterns, qname, proj)| query_text(patterns, qname, proj))
}

/// A graph with a query that is random half the time, and otherwise built
/// from the graph's own triples with some positions turned into variables.
pub fn graph_and_query_strategy() -> impl Strategy<Value = (Graph, (String, Vec<[Pos; 3]>))> {
    graph_strategy().prop_flat_map(|graph| {
        let triples: Vec<Triple> = graph.iter().cloned().collect();
        let random = query_strategy().boxed();
        let query = if triples.is_empty() {
            random
        } else {
            let var = prop::option::weighted(0.5, prop::sample::select(vec!["x", "y", "z"]));
            let derived = (
                prop::collection::vec((prop::sample::select(triples), [var.clone(), var.clone(), var]), 1..=3),
                any::<bool>(),
                any::<u8>(),
            )
                .prop_map(|(picks, qname, proj)| {
                    let patterns = picks
                        .into_iter()
                        .map(|(t, vars)| {
                            let pos = |v: Option<&'static str>, term: &Term| v.map_or_else(|| Pos::Const(term.clone()), Pos::Var);
                            [pos(vars[0], t.subject()), pos(vars[1], t.predicate()), pos(vars[2], t.object())]
                        })
                        .collect();
                    query_text(patterns, qname, proj)
                });
            prop_oneof![random, derived].boxed()
        };
        (Just(graph), query)
    })
}

fn query_text(patterns: Vec<[Pos; 3]>, qname: bool, proj: u8) -> (String, Vec<[Pos; 3]>) {
    let body: Vec<String> = patterns
        .iter()
        .map(|[s, p, o]| format!("({}, {}, {})", render(s, qname), render(p, qname), render(o, qname)))
        .collect();
    let mut vars: Vec<String> = Vec::new();
    for p in &body {
        for tok in p.split([',', '(', ')', ' ']) {
            if let Some(v) = tok.strip_prefix('?') {
                if !vars.contains(&v.to_owned()) {
                    vars.push(v.to_owned());
                }
            }
        }
    }
    let projection = if proj.is_multiple_of(2) || vars.is_empty() {
        "*".to_owned()
    } else {
        let keep: Vec<String> = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| (proj >> (i + 1)) & 1 == 1 || *i == 0)
            .map(|(_, v)| format!("?{v}"))
            .collect();
        keep.join(", ")
    };
    let text = format!("SELECT {projection} WHERE {} USING e FOR <{NS}>", body.join(", "));
    (text, patterns)
}

/// Every assignment of graph terms to the query variables, kept when all
/// substituted patterns are triples of the graph.
pub fn brute_force(query: &Query, graph: &Graph) -> BTreeSet<Binding> {
    let domain: Vec<Term> = graph
        .iter()
        .flat_map(|t| [t.subject().clone(), t.predicate().clone(), t.object().clone()])
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let vars = query.pattern_variables();
    let resolved: Vec<[Result<Term, String>; 3]> = query
        .patterns
        .iter()
        .map(|p| {
            p.terms().map(|t| match t {
                QueryTerm::Var(v) => Err(v.clone()),
                QueryTerm::Angle(a) => Ok(Term::Iri(a.strip_prefix("e:").map_or(a.clone(), |l| format!("{NS}{l}")))),
                QueryTerm::QName(q) => Ok(Term::Iri(format!("{NS}{}", q.strip_prefix("e:").unwrap()))),
                QueryTerm::Literal { value, language } => Ok(Term::Literal { value: value.clone(), language: language.clone() }),
            })
        })
        .collect();
    let mut results = BTreeSet::new();
    if domain.is_empty() {
        return results;
    }
    let total = domain.len().pow(vars.len() as u32);
    for mut n in 0..total {
        let mut assignment = Binding::new();
        for v in &vars {
            assignment.insert(v.clone(), domain[n % domain.len()].clone());
            n /= domain.len();
        }
        let value = |pos: &Result<Term, String>| match pos {
            Ok(t) => t.clone(),
            Err(v) => assignment.get(v).unwrap().clone(),
        };
        let all_hold = resolved.iter().all(|[s, p, o]| {
            Triple::new(value(s), value(p), value(o)).is_ok_and(|t| graph.contains(&t))
        });
        if all_hold {
            results.insert(assignment.project(&query.result_variables()));
        }
    }
    results
}

