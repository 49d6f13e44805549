//! Namespaces and well-known IRIs.

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const DC_NS: &str = "http://purl.org/dc/elements/1.1/";
/// The `mir` namespace as written in link-context queries.
pub const MIR_NS: &str = "http://www.rz.fhtw-berlin.de/MIR#";
pub const XLINK_NS: &str = "http://www.w3.org/1999/xlink";
pub const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_STATEMENT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Statement";
pub const RDF_SUBJECT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#subject";
pub const RDF_PREDICATE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#predicate";
pub const RDF_OBJECT: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#object";

pub const DC_CREATOR: &str = "http://purl.org/dc/elements/1.1/creator";
pub const DC_TITLE: &str = "http://purl.org/dc/elements/1.1/title";
pub const DC_DESCRIPTION: &str = "http://purl.org/dc/elements/1.1/description";

pub const MIR_PART_OF: &str = "http://www.rz.fhtw-berlin.de/MIR#partOf";
pub const MIR_LABEL: &str = "http://www.rz.fhtw-berlin.de/MIR#label";
pub const MIR_BACKGROUND_INFO: &str = "http://www.rz.fhtw-berlin.de/MIR#BackgroundInfo";

/// True when `uri` names the `mir` namespace. XML documents declare it
/// without the trailing `#`, queries with it.
pub fn is_mir_namespace(uri: &str) -> bool {
    uri.trim_end_matches('#') == MIR_NS.trim_end_matches('#')
}
