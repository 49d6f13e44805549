//! End-to-end composition over a store snapshot:
//! project → evaluate contexts → filter by document → decorate.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::context::{self, compose_contexts, filter_by_document, ContextError, LinkContext, SelectedLink};
use crate::link::{self, project_linkbase, LinkError, Linkbase, ProjectionMode};
use crate::metadata::{self, MetadataError};
use crate::rdf::{ntriples, Graph, Term};
use crate::render::{self, RenderError};
use crate::store::{EntityKind, LogicalPath, PathSpace, StoreError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{path}: {source}")]
    Metadata { path: String, source: MetadataError },
    #[error("{path}: {source}")]
    Linkbase { path: String, source: LinkError },
    #[error("{path}: {source}")]
    Context { path: String, source: ContextError },
    #[error("{path}: {source}")]
    Document { path: String, source: roxmltree::Error },
    #[error("{path}: {source}")]
    Graph { path: String, source: ntriples::ParseError },
    #[error(transparent)]
    Projection(LinkError),
    #[error(transparent)]
    Evaluation(ContextError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("unknown document {0}")]
    UnknownDocument(String),
    #[error("unknown context {0}")]
    UnknownContext(String),
}

impl PipelineError {
    /// True for failures caused by malformed stored or supplied input.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            PipelineError::Metadata { .. }
                | PipelineError::Linkbase { .. }
                | PipelineError::Context { .. }
                | PipelineError::Document { .. }
                | PipelineError::Graph { .. }
        )
    }
}

/// Checks that `content` parses as `kind`; `iri` is its published address.
pub fn validate(kind: EntityKind, content: &str, iri: &str) -> Result<(), PipelineError> {
    let path = iri.to_owned();
    match kind {
        EntityKind::Document => roxmltree::Document::parse(content)
            .map(drop)
            .map_err(|source| PipelineError::Document { path, source }),
        EntityKind::Metadata => metadata::parse_metadata(content)
            .and_then(|r| metadata::metadata_to_rdf(&r))
            .map(drop)
            .map_err(|source| PipelineError::Metadata { path, source }),
        EntityKind::Linkbase => link::parse_linkbase_with_base(content, Some(iri))
            .map(drop)
            .map_err(|source| PipelineError::Linkbase { path, source }),
        EntityKind::Context => context::parse_context_with_base(content, iri)
            .map(drop)
            .map_err(|source| PipelineError::Context { path, source }),
        EntityKind::Graph => ntriples::parse(content).map(drop).map_err(|source| PipelineError::Graph { path, source }),
    }
}

#[derive(Debug, Clone)]
pub struct StoredDocument {
    pub iri: Term,
    pub content: String,
}

/// Everything the decoration pipeline needs, loaded once from a store.
#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    pub documents: BTreeMap<LogicalPath, StoredDocument>,
    pub content_graph: Graph,
    pub linkbase: Linkbase,
    pub contexts: BTreeMap<LogicalPath, Result<LinkContext, String>>,
    /// Reified projection of the linkbase united with the content graph.
    pub link_graph: Graph,
    /// Entries that failed to load, with their diagnostics.
    pub issues: Vec<(LogicalPath, String)>,
}

impl Snapshot {
    pub fn load(space: &PathSpace) -> Result<Snapshot, StoreError> {
        let mut snap = Snapshot::default();
        let mut linkbases = Vec::new();
        for (path, kind) in space.list(&LogicalPath::root())? {
            let content = space.get_as(&path, kind)?;
            match kind {
                EntityKind::Document => {
                    let iri = Term::Iri(space.iri_for(&path, kind));
                    snap.documents.insert(path, StoredDocument { iri, content });
                }
                EntityKind::Metadata => {
                    match metadata::parse_metadata(&content).and_then(|r| metadata::metadata_to_rdf(&r)) {
                        Ok(g) => snap.content_graph.extend_from(&g),
                        Err(e) => snap.issues.push((path, e.to_string())),
                    }
                }
                EntityKind::Linkbase => {
                    match link::parse_linkbase_with_base(&content, Some(&space.iri_for(&path, kind))) {
                        Ok(lb) => linkbases.push(lb),
                        Err(e) => snap.issues.push((path, e.to_string())),
                    }
                }
                EntityKind::Context => {
                    let parsed = context::parse_context_with_base(&content, &space.iri_for(&path, kind))
                        .map_err(|e| e.to_string());
                    if let Err(e) = &parsed {
                        snap.issues.push((path.clone(), e.clone()));
                    }
                    snap.contexts.insert(path, parsed);
                }
                EntityKind::Graph => {}
            }
        }
        match Linkbase::merge(linkbases) {
            Ok(lb) => snap.linkbase = lb,
            Err(e) => snap.issues.push((LogicalPath::root(), e.to_string())),
        }
        match project_linkbase(&snap.linkbase, &snap.content_graph, ProjectionMode::Reified) {
            Ok(g) => {
                snap.link_graph = snap.content_graph.clone();
                snap.link_graph.extend_from(&g);
            }
            Err(e) => snap.issues.push((LogicalPath::root(), e.to_string())),
        }
        Ok(snap)
    }

    /// Content statements plus the linkbase projected in `mode`.
    pub fn project(&self, mode: ProjectionMode) -> Result<Graph, PipelineError> {
        let mut graph = self.content_graph.clone();
        graph.extend_from(&project_linkbase(&self.linkbase, &self.content_graph, mode).map_err(PipelineError::Projection)?);
        Ok(graph)
    }

    pub fn document(&self, path: &LogicalPath) -> Result<&StoredDocument, PipelineError> {
        self.documents.get(path).ok_or_else(|| PipelineError::UnknownDocument(path.to_string()))
    }

    pub fn context(&self, path: &LogicalPath) -> Result<&LinkContext, PipelineError> {
        match self.contexts.get(path) {
            None => Err(PipelineError::UnknownContext(path.to_string())),
            Some(Ok(ctx)) => Ok(ctx),
            Some(Err(msg)) => Err(PipelineError::Context {
                path: path.to_string(),
                source: ContextError::Parse(msg.clone()),
            }),
        }
    }

    /// Links the contexts select whose source anchor lies on the document.
    pub fn selected_links(&self, document: &LogicalPath, contexts: &[LinkContext]) -> Result<Vec<SelectedLink>, PipelineError> {
        let doc = self.document(document)?;
        let selected = compose_contexts(contexts, &self.link_graph).map_err(PipelineError::Evaluation)?;
        filter_by_document(&selected, &doc.iri, &self.linkbase).map_err(PipelineError::Evaluation)
    }

    /// The document with every applicable link wrapped in place.
    pub fn decorate(&self, document: &LogicalPath, contexts: &[LinkContext]) -> Result<String, PipelineError> {
        let doc = self.document(document)?;
        let selected = self.selected_links(document, contexts)?;
        let plan = render::plan_decorations(&doc.iri, &selected, &self.linkbase)?;
        Ok(render::decorate(&doc.content, &plan)?)
    }
}
