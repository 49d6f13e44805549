//! Link contexts: authored selection schemes over the link graph.
//!
//! A context document is an `rdf:Description` carrying Dublin Core
//! descriptors and one `mir:link-context` element whose text (usually a
//! CDATA section) is an RDQL query. Evaluating a context never creates links;
//! it picks existing reification nodes out of the graph.

use std::collections::HashSet;

use thiserror::Error;

use crate::link::Linkbase;
use crate::rdf::vocab::{self, DC_NS, DC_TITLE, RDF_NS, XML_NS};
use crate::rdf::{unreify, Graph, Term, Triple};
use crate::rdql::{self, Query, RdqlError};

/// Base for context ids given as relative `rdf:about` values.
pub const DEFAULT_CONTEXT_BASE: &str = "http://example.org/contexts/";

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("malformed context XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("invalid context document: {0}")]
    Parse(String),
    #[error("embedded query does not parse: {0}")]
    InvalidQuery(RdqlError),
    #[error("context lacks required descriptor dc:{0}")]
    MissingDescriptor(&'static str),
    #[error(transparent)]
    Evaluation(#[from] RdqlError),
    #[error("anchor {0} is not in the linkbase")]
    UnknownAnchor(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkContext {
    pub id: Term,
    pub creator: String,
    pub title: String,
    pub title_language: Option<String>,
    pub description: Option<String>,
    pub query_text: String,
    pub query: Query,
}

/// A link picked by a context, with its unreified relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedLink {
    pub link: Term,
    /// `(target anchor, arcrole, source anchor)`.
    pub inner: Triple,
    pub title: Option<String>,
}

impl SelectedLink {
    pub fn source(&self) -> &Term {
        self.inner.object()
    }

    pub fn target(&self) -> &Term {
        self.inner.subject()
    }

    pub fn arcrole(&self) -> &Term {
        self.inner.predicate()
    }
}

pub fn parse_context(rdf_xml: &str) -> Result<LinkContext, ContextError> {
    parse_context_with_base(rdf_xml, DEFAULT_CONTEXT_BASE)
}

pub fn parse_context_with_base(rdf_xml: &str, base: &str) -> Result<LinkContext, ContextError> {
    let doc = roxmltree::Document::parse(rdf_xml)?;
    let is_context_el = |n: &roxmltree::Node| {
        n.is_element() && n.tag_name().name() == "link-context" && n.tag_name().namespace().is_some_and(vocab::is_mir_namespace)
    };
    let description = doc
        .descendants()
        .filter(|n| n.has_tag_name((RDF_NS, "Description")))
        .find(|n| n.children().any(|c| is_context_el(&c)))
        .ok_or_else(|| ContextError::Parse("no rdf:Description with a mir:link-context element".into()))?;

    let about = description
        .attribute((RDF_NS, "about"))
        .ok_or_else(|| ContextError::Parse("rdf:Description has no rdf:about".into()))?;
    let id = url::Url::parse(base)
        .and_then(|b| b.join(about))
        .ok()
        .and_then(|u| Term::iri(u.as_str()).ok())
        .ok_or_else(|| ContextError::Parse(format!("cannot resolve rdf:about {about:?}")))?;

    let text_of = |n: roxmltree::Node| -> String {
        n.descendants().filter(|d| d.is_text()).filter_map(|d| d.text()).collect::<String>().trim().to_owned()
    };
    let dc = |name: &str| {
        description.children().find(|c| {
            c.is_element() && c.tag_name().namespace() == Some(DC_NS) && c.tag_name().name().eq_ignore_ascii_case(name)
        })
    };

    let creator = dc("creator").map(text_of).ok_or(ContextError::MissingDescriptor("creator"))?;
    let title_el = dc("title").ok_or(ContextError::MissingDescriptor("title"))?;
    let title_language = title_el.attribute((XML_NS, "lang")).map(str::to_owned);
    let title = text_of(title_el);
    let description_text = dc("description").map(text_of);

    let query_el = description.children().find(is_context_el).expect("checked above");
    let query_text = text_of(query_el);
    let query = rdql::parse_query(&query_text).map_err(ContextError::InvalidQuery)?;

    Ok(LinkContext { id, creator, title, title_language, description: description_text, query_text, query })
}

/// Selected links plus the number of result bindings that named no link.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextEvaluation {
    pub selected: Vec<SelectedLink>,
    pub dropped: usize,
}

pub fn evaluate_context_report(ctx: &LinkContext, link_graph: &Graph) -> Result<ContextEvaluation, ContextError> {
    let bindings = rdql::evaluate(&ctx.query, link_graph)?;
    let mut out = ContextEvaluation::default();
    let mut seen = HashSet::new();
    for binding in &bindings {
        let mut found = false;
        for term in binding.terms().filter(|t| !t.is_literal() && link_graph.is_reification_node(t)) {
            let Ok(inner) = unreify(link_graph, term) else {
                continue;
            };
            found = true;
            if seen.insert(term.clone()) {
                let title = link_graph.objects(term, DC_TITLE).find(|o| o.is_literal()).map(|o| o.value().to_owned());
                out.selected.push(SelectedLink { link: term.clone(), inner, title });
            }
        }
        if !found {
            out.dropped += 1;
        }
    }
    if out.dropped > 0 {
        log::warn!("context {}: {} result binding(s) named no link", ctx.id.value(), out.dropped);
    }
    Ok(out)
}

/// Runs the context query and turns each link-valued binding into a [`SelectedLink`].
pub fn evaluate_context(ctx: &LinkContext, link_graph: &Graph) -> Result<Vec<SelectedLink>, ContextError> {
    evaluate_context_report(ctx, link_graph).map(|e| e.selected)
}

/// Keeps links whose source anchor lives on `document`.
pub fn filter_by_document(
    selected: &[SelectedLink],
    document: &Term,
    linkbase: &Linkbase,
) -> Result<Vec<SelectedLink>, ContextError> {
    let mut kept = Vec::new();
    for s in selected {
        let source = linkbase
            .anchor(s.source())
            .ok_or_else(|| ContextError::UnknownAnchor(s.source().value().to_owned()))?;
        if &source.resource == document {
            kept.push(s.clone());
        }
    }
    Ok(kept)
}

/// Union by link id across contexts; the earliest context wins.
pub fn compose_contexts(contexts: &[LinkContext], link_graph: &Graph) -> Result<Vec<SelectedLink>, ContextError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for ctx in contexts {
        for s in evaluate_context(ctx, link_graph)? {
            if seen.insert(s.link.clone()) {
                out.push(s);
            }
        }
    }
    Ok(out)
}
