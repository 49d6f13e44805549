//! XLink extended-link linkbases and their RDF projections.
//!
//! A link is projected either as a reified statement whose subject is the
//! link itself, or as a single harvested triple. The reified inner statement
//! is oriented target-first: `(to-anchor, arcrole, from-anchor)`. The simple
//! projection is oriented source-first: `(from-anchor, arcrole, to-anchor)`.
//! Do not flip either one.

use std::collections::{BTreeSet, HashSet};

use roxmltree::Node;
use thiserror::Error;

use crate::anchor::{self, derive_anchor_descriptors, is_ncname, Anchor, AnchorError};
use crate::rdf::vocab::{self, DC_CREATOR, DC_NS, DC_TITLE, XLINK_NS, XML_NS};
use crate::rdf::{reify, Graph, RdfError, Term, Triple};

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("malformed linkbase XML: {0}")]
    Parse(#[from] roxmltree::Error),
    #[error("root element must be `linkbase`, found `{0}`")]
    UnexpectedRoot(String),
    #[error("linkbase has no xml:base and no fallback base was given")]
    MissingBase,
    #[error("invalid base IRI {0:?}")]
    InvalidBase(String),
    #[error("locator without xlink:href (line {0})")]
    MissingHref(u32),
    #[error("arc references undeclared label `{0}`")]
    DanglingLabel(String),
    #[error("label `{0}` is not an NCName")]
    InvalidLabel(String),
    #[error("invalid direction `{0}` (expected `uni` or `bi`)")]
    InvalidDirection(String),
    #[error("invalid arcrole {0:?}")]
    InvalidArcrole(String),
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("link {0} has no arcrole")]
    MissingArcrole(String),
    #[error("link {link} references unknown anchor {anchor}")]
    UnknownAnchor { link: String, anchor: String },
    #[error(transparent)]
    Anchor(#[from] AnchorError),
    #[error(transparent)]
    Rdf(#[from] RdfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    #[default]
    Uni,
    Bi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub id: Term,
    /// Source anchor id.
    pub from: Term,
    /// Target anchor id.
    pub to: Term,
    pub arcrole: Option<Term>,
    pub title: Option<String>,
    pub creator: Option<String>,
    pub direction: Direction,
}

impl Link {
    /// Node naming the reversed statement of a bidirectional link.
    pub fn reverse_id(&self) -> Term {
        Term::Iri(format!("{}-rev", self.id.value()))
    }

    fn arcrole(&self) -> Result<&Term, LinkError> {
        self.arcrole.as_ref().ok_or_else(|| LinkError::MissingArcrole(self.id.value().to_owned()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Linkbase {
    pub base: Option<Term>,
    pub anchors: Vec<Anchor>,
    pub links: Vec<Link>,
    /// Non-fatal findings, e.g. surplus titles.
    pub warnings: Vec<String>,
}

impl Linkbase {
    pub fn anchor(&self, id: &Term) -> Option<&Anchor> {
        self.anchors.iter().find(|a| &a.id == id)
    }

    pub fn link(&self, id: &Term) -> Option<&Link> {
        self.links.iter().find(|l| &l.id == id)
    }

    /// Concatenates linkbases, rejecting identifier collisions.
    pub fn merge<I: IntoIterator<Item = Linkbase>>(parts: I) -> Result<Linkbase, LinkError> {
        let mut merged = Linkbase::default();
        for part in parts {
            merged.base = merged.base.or(part.base);
            merged.anchors.extend(part.anchors);
            merged.links.extend(part.links);
            merged.warnings.extend(part.warnings);
        }
        merged.check_unique_ids()?;
        Ok(merged)
    }

    fn check_unique_ids(&self) -> Result<(), LinkError> {
        let mut seen = HashSet::new();
        let rev: Vec<Term> = self.links.iter().filter(|l| l.direction == Direction::Bi).map(Link::reverse_id).collect();
        let ids = self.anchors.iter().map(|a| &a.id).chain(self.links.iter().map(|l| &l.id)).chain(rev.iter());
        for id in ids {
            if !seen.insert(id.clone()) {
                return Err(LinkError::DuplicateId(id.value().to_owned()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectionMode {
    #[default]
    Reified,
    Simple,
}

impl std::str::FromStr for ProjectionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reified" => Ok(ProjectionMode::Reified),
            "simple" => Ok(ProjectionMode::Simple),
            other => Err(format!("unknown projection mode `{other}`")),
        }
    }
}

pub fn parse_linkbase(xml: &str) -> Result<Linkbase, LinkError> {
    parse_linkbase_with_base(xml, None)
}

/// Like [`parse_linkbase`], using `fallback` when the root has no xml:base.
pub fn parse_linkbase_with_base(xml: &str, fallback: Option<&str>) -> Result<Linkbase, LinkError> {
    let doc = roxmltree::Document::parse(xml)?;
    let root = doc.root_element();
    if root.tag_name().name() != "linkbase" {
        return Err(LinkError::UnexpectedRoot(root.tag_name().name().to_owned()));
    }
    let base_str = root.attribute((XML_NS, "base")).or(fallback).ok_or(LinkError::MissingBase)?;
    let base = url::Url::parse(base_str).map_err(|_| LinkError::InvalidBase(base_str.to_owned()))?;

    let mut parser = LinkbaseParser { base, out: Linkbase::default(), link_ordinal: 0, anchor_ordinal: 0 };
    parser.out.base = Some(Term::iri(parser.base.as_str())?);
    for ext in root.descendants().filter(|n| xlink_type(*n) == Some("extended")) {
        parser.extended_link(ext)?;
    }
    parser.out.check_unique_ids()?;
    for w in &parser.out.warnings {
        log::warn!("{w}");
    }
    Ok(parser.out)
}

fn xlink_type<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.attribute((XLINK_NS, "type"))
}

fn id_attribute<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.attribute((XML_NS, "id")).or_else(|| node.attribute("id"))
}

struct LinkbaseParser {
    base: url::Url,
    out: Linkbase,
    link_ordinal: usize,
    anchor_ordinal: usize,
}

#[derive(Default)]
struct Titles {
    first: Option<String>,
    languages: BTreeSet<Option<String>>,
}

impl LinkbaseParser {
    fn mint(&self, fragment: &str) -> Result<Term, LinkError> {
        let mut url = self.base.clone();
        url.set_fragment(Some(fragment));
        Ok(Term::iri(url.as_str())?)
    }

    /// Title from the xlink:title attribute and title-type children. Only the
    /// first title per language is kept.
    fn titles(&mut self, node: Node, owner: &str) -> Option<String> {
        let mut titles = Titles::default();
        if let Some(t) = node.attribute((XLINK_NS, "title")) {
            titles.first = Some(t.to_owned());
            titles.languages.insert(None);
        }
        for child in node.children().filter(|c| xlink_type(*c) == Some("title")) {
            let lang = child.attribute((XML_NS, "lang")).map(str::to_owned);
            let text: String = child.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
            if !titles.languages.insert(lang.clone()) {
                self.out.warnings.push(format!(
                    "{owner}: ignoring additional title {:?} for language {}",
                    text.trim(),
                    lang.as_deref().unwrap_or("(none)")
                ));
                continue;
            }
            titles.first.get_or_insert_with(|| text.trim().to_owned());
        }
        titles.first
    }

    fn extended_link(&mut self, ext: Node) -> Result<(), LinkError> {
        let mut local: Vec<usize> = Vec::new();
        for loc in ext.children().filter(|c| xlink_type(*c) == Some("locator")) {
            let pos = doc_line(loc);
            let href = loc.attribute((XLINK_NS, "href")).ok_or(LinkError::MissingHref(pos))?;
            let (resource, selector) = anchor::parse_href(href, Some(&self.base))?;
            let label = loc.attribute((XLINK_NS, "label")).map(str::to_owned);
            if let Some(l) = &label {
                if !is_ncname(l) {
                    return Err(LinkError::InvalidLabel(l.clone()));
                }
            }
            self.anchor_ordinal += 1;
            let id = match id_attribute(loc) {
                Some(id) => self.mint(id)?,
                None => self.mint(&format!("anchor-{}", self.anchor_ordinal))?,
            };
            let title = self.titles(loc, href);
            local.push(self.out.anchors.len());
            self.out.anchors.push(Anchor { id, resource, selector, title, label });
        }

        for arc in ext.children().filter(|c| xlink_type(*c) == Some("arc")) {
            let from = self.endpoints(&local, arc.attribute((XLINK_NS, "from")))?;
            let to = self.endpoints(&local, arc.attribute((XLINK_NS, "to")))?;
            let arcrole = arc
                .attribute((XLINK_NS, "arcrole"))
                .map(|r| {
                    self.base
                        .join(r)
                        .ok()
                        .and_then(|u| Term::iri(u.as_str()).ok())
                        .ok_or_else(|| LinkError::InvalidArcrole(r.to_owned()))
                })
                .transpose()?;
            let direction = match arc
                .attributes()
                .find(|a| a.name() == "direction" && a.namespace().is_none_or(vocab::is_mir_namespace))
                .map(|a| a.value())
            {
                None | Some("uni") => Direction::Uni,
                Some("bi") => Direction::Bi,
                Some(other) => return Err(LinkError::InvalidDirection(other.to_owned())),
            };
            let creator = arc
                .children()
                .find(|c| c.is_element() && c.tag_name().namespace() == Some(DC_NS) && c.tag_name().name() == "creator")
                .map(|c| c.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect::<String>().trim().to_owned());
            let owner = id_attribute(arc).unwrap_or("arc").to_owned();
            let title = self.titles(arc, &owner);

            let pairs: Vec<(Term, Term)> =
                from.iter().flat_map(|f| to.iter().map(move |t| (f.clone(), t.clone()))).collect();
            let explicit = id_attribute(arc);
            for (n, (from, to)) in pairs.iter().enumerate() {
                self.link_ordinal += 1;
                let id = match explicit {
                    Some(id) if pairs.len() == 1 => self.mint(id)?,
                    Some(id) => self.mint(&format!("{id}-{}", n + 1))?,
                    None => self.mint(&format!("link-{}", self.link_ordinal))?,
                };
                self.out.links.push(Link {
                    id,
                    from: from.clone(),
                    to: to.clone(),
                    arcrole: arcrole.clone(),
                    title: title.clone(),
                    creator: creator.clone(),
                    direction,
                });
            }
        }
        Ok(())
    }

    /// Anchor ids carrying `label` within one extended link; every locator
    /// when the label is absent.
    fn endpoints(&self, local: &[usize], label: Option<&str>) -> Result<Vec<Term>, LinkError> {
        let anchors = local.iter().map(|&i| &self.out.anchors[i]);
        let hits: Vec<Term> = match label {
            None => anchors.map(|a| a.id.clone()).collect(),
            Some(l) => anchors.filter(|a| a.label.as_deref() == Some(l)).map(|a| a.id.clone()).collect(),
        };
        match label {
            Some(l) if hits.is_empty() => Err(LinkError::DanglingLabel(l.to_owned())),
            _ => Ok(hits),
        }
    }
}

fn doc_line(node: Node) -> u32 {
    node.document().text_pos_at(node.range().start).row
}

fn literal_triple(subject: &Term, predicate: &str, value: &str) -> Result<Triple, RdfError> {
    Triple::new(subject.clone(), Term::Iri(predicate.to_owned()), Term::literal(value))
}

/// Reification of `(to, arcrole, from)` under the link id, plus title and
/// creator. Bidirectional links add the reversed statement under
/// [`Link::reverse_id`].
pub fn link_to_reified_rdf(link: &Link, linkbase: &Linkbase) -> Result<Graph, LinkError> {
    let arcrole = link.arcrole()?;
    for end in [&link.from, &link.to] {
        if linkbase.anchor(end).is_none() {
            return Err(LinkError::UnknownAnchor { link: link.id.value().to_owned(), anchor: end.value().to_owned() });
        }
    }
    let mut nodes = vec![(link.id.clone(), Triple::new(link.to.clone(), arcrole.clone(), link.from.clone())?)];
    if link.direction == Direction::Bi {
        nodes.push((link.reverse_id(), Triple::new(link.from.clone(), arcrole.clone(), link.to.clone())?));
    }
    let mut graph = Graph::new();
    for (node, inner) in nodes {
        for t in reify(&inner, &node)? {
            graph.insert(t);
        }
        if let Some(title) = &link.title {
            graph.insert(literal_triple(&node, DC_TITLE, title)?);
        }
        if let Some(creator) = &link.creator {
            graph.insert(literal_triple(&node, DC_CREATOR, creator)?);
        }
    }
    Ok(graph)
}

/// The harvested `(from, arcrole, to)` statement; link metadata is dropped.
pub fn link_to_simple_rdf(link: &Link) -> Result<Graph, LinkError> {
    let arcrole = link.arcrole()?;
    Ok(Graph::new().with(Triple::new(link.from.clone(), arcrole.clone(), link.to.clone())?))
}

/// Anchor descriptors for every anchor plus the chosen projection of every link.
pub fn project_linkbase(linkbase: &Linkbase, content_graph: &Graph, mode: ProjectionMode) -> Result<Graph, LinkError> {
    let mut graph = Graph::new();
    for anchor in &linkbase.anchors {
        graph.extend_from(&derive_anchor_descriptors(anchor, content_graph));
    }
    for link in &linkbase.links {
        let projected = match mode {
            ProjectionMode::Reified => link_to_reified_rdf(link, linkbase)?,
            ProjectionMode::Simple => link_to_simple_rdf(link)?,
        };
        graph.extend_from(&projected);
    }
    Ok(graph)
}
