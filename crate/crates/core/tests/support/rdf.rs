//! Arbitrary terms and triples, including awkward literals.

use proptest::prelude::*;
use semlink::rdf::{Term, Triple};

pub fn iri_strategy() -> impl Strategy<Value = Term> {
    "[a-z]{1,6}(/[a-zA-Z0-9_]{1,5}){0,2}".prop_map(|s| Term::iri(format!("http://example.org/{s}")).unwrap())
}

pub fn literal_strategy() -> impl Strategy<Value = Term> {
    (
        prop::collection::vec(prop_oneof![Just('"'), Just('\n'), Just('\\'), Just('\t'), Just('\r'), Just('é'), Just(' '), any::<char>()], 0..10),
        prop::option::of("[a-z]{2}(-[A-Z]{2})?"),
    )
        .prop_map(|(chars, lang)| {
            let value: String = chars.into_iter().collect();
            match lang {
                Some(l) => Term::lang_literal(value, l),
                None => Term::literal(value),
            }
        })
}

pub fn blank_strategy() -> impl Strategy<Value = Term> {
    "b[a-z0-9]{0,4}".prop_map(|s| Term::blank(s).unwrap())
}

pub fn subject_strategy() -> impl Strategy<Value = Term> {
    prop_oneof![3 => iri_strategy(), 1 => blank_strategy()]
}

pub fn object_strategy() -> impl Strategy<Value = Term> {
    prop_oneof![2 => iri_strategy(), 2 => literal_strategy(), 1 => blank_strategy()]
}

pub fn triple_strategy() -> impl Strategy<Value = Triple> {
    (subject_strategy(), iri_strategy(), object_strategy()).prop_map(|(s, p, o)| Triple::new(s, p, o).unwrap())
}

