//! Hyperlinks as reified RDF statements, selected at presentation time by
//! stored query-based link contexts.
//!
//! The crate follows a four-tier layout. Each tier talks only to its
//! neighbour:
//!
//! - [`anchor`]: addressable fragments of content documents,
//! - [`link`]: XLink linkbases projected into RDF,
//! - [`context`]: RDQL selections over the link graph,
//!
//! all on top of the [`rdf`] model. [`metadata`] turns content metadata into
//! statements, [`render`] writes selected links into a document, [`store`]
//! persists everything and [`pipeline`] wires the pieces together.

pub mod anchor;
pub mod context;
pub mod link;
pub mod metadata;
pub mod pipeline;
pub mod rdf;
pub mod rdql;
pub mod render;
pub mod store;

pub use anchor::{Anchor, Selector};
pub use context::{LinkContext, SelectedLink};
pub use link::{Link, Linkbase, ProjectionMode};
pub use pipeline::Snapshot;
pub use rdf::{Binding, Graph, Term, Triple, TriplePattern};
pub use rdql::Query;
pub use render::Decoration;
pub use store::{EntityKind, LogicalPath, PathSpace};
