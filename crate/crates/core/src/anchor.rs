//! Anchors: addressable fragments of content documents.
//!
//! Selectors come in three forms, written as the fragment of a locator href:
//! `doc.xml` (whole resource), `doc.xml#id` (shorthand id) and
//! `doc.xml#element(/1/3/2)` (child-element sequence). Element paths count
//! 1-based element children starting below the document element.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::rdf::vocab::{DC_TITLE, MIR_LABEL, MIR_PART_OF, XML_NS};
use crate::rdf::{Graph, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnchorError {
    #[error("selector matched nothing: {0}")]
    NoMatch(String),
    #[error("selector matched more than one element: {0}")]
    AmbiguousMatch(String),
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("invalid href {href:?}: {reason}")]
    InvalidHref { href: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    WholeResource,
    ShorthandId(String),
    /// 1-based child element indexes.
    ElementPath(Vec<usize>),
}

impl Selector {
    /// Parses the fragment part of an href (without the `#`).
    pub fn from_fragment(fragment: Option<&str>) -> Result<Self, AnchorError> {
        let Some(fragment) = fragment.filter(|f| !f.is_empty()) else {
            return Ok(Selector::WholeResource);
        };
        if let Some(inner) = fragment.strip_prefix("element(").and_then(|s| s.strip_suffix(')')) {
            return Self::element_path(inner);
        }
        if is_ncname(fragment) {
            Ok(Selector::ShorthandId(fragment.to_owned()))
        } else {
            Err(AnchorError::InvalidSelector(fragment.to_owned()))
        }
    }

    pub fn element_path(path: &str) -> Result<Self, AnchorError> {
        let bad = || AnchorError::InvalidSelector(format!("element({path})"));
        let rest = path.strip_prefix('/').ok_or_else(bad)?;
        let steps = rest
            .split('/')
            .map(|s| s.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Selector::ElementPath(steps))
    }

    /// Fragment surface syntax, `None` for the whole resource.
    pub fn fragment(&self) -> Option<String> {
        match self {
            Selector::WholeResource => None,
            Selector::ShorthandId(id) => Some(id.clone()),
            Selector::ElementPath(steps) => {
                let path: String = steps.iter().map(|s| format!("/{s}")).collect();
                Some(format!("element({path})"))
            }
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fragment() {
            Some(frag) => write!(f, "#{frag}"),
            None => Ok(()),
        }
    }
}

/// XML NCName, approximated over Unicode alphanumerics.
pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{b7}'))
}

/// Splits an href into the resource IRI (resolved against `base`) and selector.
pub fn parse_href(href: &str, base: Option<&url::Url>) -> Result<(Term, Selector), AnchorError> {
    let invalid = |reason: String| AnchorError::InvalidHref { href: href.to_owned(), reason };
    let (resource, fragment) = match href.split_once('#') {
        Some((r, f)) => (r, Some(f)),
        None => (href, None),
    };
    let resolved = match base {
        Some(base) => base.join(resource).map_err(|e| invalid(e.to_string()))?,
        None => url::Url::parse(resource).map_err(|e| invalid(e.to_string()))?,
    };
    let term = Term::iri(resolved.as_str()).map_err(|e| invalid(e.to_string()))?;
    Ok((term, Selector::from_fragment(fragment)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub id: Term,
    pub resource: Term,
    pub selector: Selector,
    pub title: Option<String>,
    pub label: Option<String>,
}

impl Anchor {
    /// The resource IRI followed by the selector fragment.
    pub fn href(&self) -> String {
        format!("{}{}", self.resource.value(), self.selector)
    }
}

/// A resolved element: its byte span in the source and its child-sequence path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentRef {
    pub range: Range<usize>,
    pub name: String,
    /// 1-based element indexes from the document element.
    pub path: Vec<usize>,
}

/// Resolves a selector against a parsed document.
pub fn resolve<'a, 'input>(
    doc: &'a roxmltree::Document<'input>,
    selector: &Selector,
) -> Result<roxmltree::Node<'a, 'input>, AnchorError> {
    let root = doc.root_element();
    match selector {
        Selector::WholeResource => Ok(root),
        Selector::ShorthandId(id) => {
            let mut hits = root.descendants().filter(|n| {
                n.is_element() && (n.attribute((XML_NS, "id")) == Some(id) || n.attribute("id") == Some(id))
            });
            let first = hits.next().ok_or_else(|| AnchorError::NoMatch(format!("#{id}")))?;
            if hits.next().is_some() {
                return Err(AnchorError::AmbiguousMatch(format!("#{id}")));
            }
            Ok(first)
        }
        Selector::ElementPath(steps) => {
            let mut node = root;
            for &step in steps {
                node = node
                    .children()
                    .filter(|c| c.is_element())
                    .nth(step - 1)
                    .ok_or_else(|| AnchorError::NoMatch(selector.to_string()))?;
            }
            Ok(node)
        }
    }
}

/// Parses `document` and resolves `selector`; unparsable input never matches.
pub fn resolve_selector(document: &str, selector: &Selector) -> Result<FragmentRef, AnchorError> {
    let doc = roxmltree::Document::parse(document)
        .map_err(|e| AnchorError::NoMatch(format!("document is not XML: {e}")))?;
    let node = resolve(&doc, selector)?;
    Ok(FragmentRef { range: node.range(), name: node.tag_name().name().to_owned(), path: element_path_of(node) })
}

fn element_path_of(node: roxmltree::Node) -> Vec<usize> {
    let mut path: Vec<usize> = node
        .ancestors()
        .take_while(|n| n.parent().is_some_and(|p| p.is_element()))
        .map(|n| n.prev_siblings().filter(|s| s.is_element()).count())
        .collect();
    path.reverse();
    path
}

/// Inherited content statements plus title/label specialisation and a
/// `mir:partOf` link back to the owning resource.
pub fn derive_anchor_descriptors(anchor: &Anchor, content_graph: &Graph) -> Graph {
    let mut out = Graph::new();
    let restate = |p: &Term, o: &Term| Triple::new(anchor.id.clone(), p.clone(), o.clone());
    for t in content_graph.iter().filter(|t| t.subject() == &anchor.resource) {
        if let Ok(t) = restate(t.predicate(), t.object()) {
            out.insert(t);
        }
    }
    let iri = |s: &str| Term::Iri(s.to_owned());
    let mut special = Vec::with_capacity(3);
    if let Some(title) = &anchor.title {
        special.push((iri(DC_TITLE), Term::literal(title)));
    }
    if let Some(label) = &anchor.label {
        special.push((iri(MIR_LABEL), Term::literal(label)));
    }
    special.push((iri(MIR_PART_OF), anchor.resource.clone()));
    for (p, o) in special {
        if let Ok(t) = restate(&p, &o) {
            out.insert(t);
        }
    }
    out
}
