//! LOM-lite content metadata and its projection into RDF.
//!
//! A metadata file is a flat list of descriptor elements under a root
//! `metadata` element whose `about` attribute names the described resource.
//! Nested categories flatten to dotted names, so
//! `<lom:general><lom:description>…` becomes `lom:general.description`.
//! Each descriptor becomes one statement with the resource as subject.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rdf::vocab::XML_NS;
use crate::rdf::{Graph, RdfError, Term, Triple};

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("malformed metadata XML: {0}")]
    Parse(#[from] roxmltree::Error),
    #[error("root element must be `metadata`, found `{0}`")]
    UnexpectedRoot(String),
    #[error("metadata root has no `about` attribute")]
    MissingResource,
    #[error("`about` is not an absolute IRI: {0}")]
    InvalidResource(String),
    #[error("descriptor `{0}` uses an undeclared namespace prefix")]
    UnknownNamespacePrefix(String),
    #[error(transparent)]
    Rdf(#[from] RdfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    /// Qualified name as written, e.g. `dc:description`.
    pub name: String,
    pub value: String,
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetadataRecord {
    pub resource: Term,
    pub descriptors: Vec<Descriptor>,
    /// Prefix to namespace URI; the empty prefix is the default namespace.
    pub namespaces: BTreeMap<String, String>,
}

pub fn parse_metadata(xml: &str) -> Result<MetadataRecord, MetadataError> {
    let doc = roxmltree::Document::parse(xml)?;
    let root = doc.root_element();
    if root.tag_name().name() != "metadata" {
        return Err(MetadataError::UnexpectedRoot(root.tag_name().name().to_owned()));
    }
    let about = root.attribute("about").ok_or(MetadataError::MissingResource)?;
    let resource = Term::iri(about).map_err(|_| MetadataError::InvalidResource(about.to_owned()))?;

    let mut namespaces = BTreeMap::new();
    let mut descriptors = Vec::new();
    for node in root.descendants().filter(|n| n.is_element()) {
        for ns in node.namespaces() {
            namespaces.entry(ns.name().unwrap_or("").to_owned()).or_insert_with(|| ns.uri().to_owned());
        }
    }
    for child in root.children().filter(|n| n.is_element()) {
        let prefix = prefix_of(child);
        collect(child, &prefix, child.tag_name().name().to_owned(), &mut descriptors);
    }
    Ok(MetadataRecord { resource, descriptors, namespaces })
}

fn prefix_of(node: roxmltree::Node) -> String {
    node.tag_name()
        .namespace()
        .and_then(|uri| node.lookup_prefix(uri))
        .unwrap_or("")
        .to_owned()
}

fn collect(node: roxmltree::Node, prefix: &str, path: String, out: &mut Vec<Descriptor>) {
    let mut children = node.children().filter(|n| n.is_element()).peekable();
    if children.peek().is_none() {
        let value: String = node.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
        let language = node
            .ancestors()
            .find_map(|a| a.attribute((XML_NS, "lang")))
            .map(str::to_owned);
        let name = if prefix.is_empty() { path } else { format!("{prefix}:{path}") };
        out.push(Descriptor { name, value: value.trim().to_owned(), language });
        return;
    }
    for child in children {
        collect(child, prefix, format!("{path}.{}", child.tag_name().name()), out);
    }
}

/// One triple per descriptor: (resource, expanded name, literal value).
pub fn metadata_to_rdf(record: &MetadataRecord) -> Result<Graph, MetadataError> {
    let mut graph = Graph::new();
    for d in &record.descriptors {
        let (prefix, local) = d.name.split_once(':').unwrap_or(("", &d.name));
        let ns = record
            .namespaces
            .get(prefix)
            .ok_or_else(|| MetadataError::UnknownNamespacePrefix(d.name.clone()))?;
        let predicate = Term::iri(format!("{ns}{local}"))?;
        let object = match &d.language {
            Some(lang) => Term::lang_literal(&d.value, lang),
            None => Term::literal(&d.value),
        };
        graph.insert(Triple::new(record.resource.clone(), predicate, object)?);
    }
    Ok(graph)
}
