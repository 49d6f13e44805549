//! Materialises selected links into a document.
//!
//! Each decoration wraps the element its source anchor addresses in an `a`
//! element. Insertion is done on the source text, so everything outside the
//! inserted tags is byte-for-byte the input.

use thiserror::Error;

use crate::anchor::{self, Anchor, AnchorError};
use crate::context::SelectedLink;
use crate::link::Linkbase;
use crate::rdf::Term;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("anchor {0} is not in the linkbase")]
    UnknownAnchor(String),
    #[error("link {link} starts on {resource}, not on the rendered document")]
    ForeignAnchor { link: String, resource: String },
    #[error("document is not well-formed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error(transparent)]
    Selector(#[from] AnchorError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoration {
    /// Source anchor, on the rendered document.
    pub anchor: Anchor,
    pub target_href: String,
    pub title: Option<String>,
    pub arcrole: Term,
    pub link_id: Term,
}

/// `target` relative to `document` when they share a base, absolute otherwise.
fn relative_href(document: &Term, target: &Anchor) -> String {
    let rel = url::Url::parse(document.value())
        .ok()
        .zip(url::Url::parse(target.resource.value()).ok())
        .and_then(|(doc, tgt)| doc.make_relative(&tgt))
        .filter(|r| !r.is_empty() && !r.starts_with("../"));
    let resource = rel.unwrap_or_else(|| target.resource.value().to_owned());
    format!("{resource}{}", target.selector)
}

pub fn plan_decorations(
    document: &Term,
    selected: &[SelectedLink],
    linkbase: &Linkbase,
) -> Result<Vec<Decoration>, RenderError> {
    let lookup = |id: &Term| linkbase.anchor(id).ok_or_else(|| RenderError::UnknownAnchor(id.value().to_owned()));
    selected
        .iter()
        .map(|s| {
            let source = lookup(s.source())?;
            if &source.resource != document {
                return Err(RenderError::ForeignAnchor {
                    link: s.link.value().to_owned(),
                    resource: source.resource.value().to_owned(),
                });
            }
            let target = lookup(s.target())?;
            Ok(Decoration {
                anchor: source.clone(),
                target_href: relative_href(document, target),
                title: s.title.clone(),
                arcrole: s.arcrole().clone(),
                link_id: s.link.clone(),
            })
        })
        .collect()
}

fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn open_tag(d: &Decoration) -> String {
    let mut tag = format!("<a href=\"{}\"", escape_attr(&d.target_href));
    if let Some(title) = &d.title {
        tag.push_str(&format!(" title=\"{}\"", escape_attr(title)));
    }
    tag.push_str(&format!(
        " data-arcrole=\"{}\" data-link=\"{}\">",
        escape_attr(d.arcrole.value()),
        escape_attr(d.link_id.value())
    ));
    tag
}

/// Wraps every decorated element. Decorations on the same element nest in
/// list order, the first one outermost.
pub fn decorate(document_xml: &str, decorations: &[Decoration]) -> Result<String, RenderError> {
    if decorations.is_empty() {
        return Ok(document_xml.to_owned());
    }
    let doc = roxmltree::Document::parse(document_xml)?;

    // (offset, closes-before-opens, order within the slot, text)
    let mut inserts: Vec<(usize, u8, isize, String)> = Vec::with_capacity(decorations.len() * 2);
    for (i, d) in decorations.iter().enumerate() {
        let node = anchor::resolve(&doc, &d.anchor.selector)?;
        let range = node.range();
        let i = i as isize;
        inserts.push((range.start, 1, i, open_tag(d)));
        inserts.push((range.end, 0, -i, "</a>".to_owned()));
    }
    inserts.sort_by_key(|a| (a.0, a.1, a.2));

    let extra: usize = inserts.iter().map(|i| i.3.len()).sum();
    let mut out = String::with_capacity(document_xml.len() + extra);
    let mut cursor = 0;
    for (offset, _, _, text) in &inserts {
        out.push_str(&document_xml[cursor..*offset]);
        out.push_str(text);
        cursor = *offset;
    }
    out.push_str(&document_xml[cursor..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchor::Selector;
    use crate::rdf::{vocab, Triple};

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    const DOC: &str = r#"<?xml version="1.0"?>
<html xmlns="http://www.w3.org/1999/xhtml"><body><p>Hamsters may suffer from <em id="hayfever">hay fever</em>.</p><p id="second">More &amp; more.</p></body></html>"#;

    fn anchor(id: &str, res: &str, selector: Selector) -> Anchor {
        Anchor { id: iri(id), resource: iri(res), selector, title: None, label: None }
    }

    fn fixture() -> (Linkbase, SelectedLink) {
        let src = anchor("http://e.org/vet/#HamstersHayFever", "http://e.org/vet/hamster-diseases.xml", Selector::ShorthandId("hayfever".into()));
        let dst = anchor("http://e.org/vet/#HayFeverHandbook", "http://e.org/vet/hay-fever-handbook.xml", Selector::WholeResource);
        let selected = SelectedLink {
            link: iri("http://e.org/vet/#Link1"),
            inner: Triple::new(dst.id.clone(), iri(vocab::MIR_BACKGROUND_INFO), src.id.clone()).unwrap(),
            title: Some("For freshman".into()),
        };
        (Linkbase { anchors: vec![src, dst], ..Default::default() }, selected)
    }

    fn decoration(selector: Selector, link: &str) -> Decoration {
        Decoration {
            anchor: anchor("http://e.org/a", "http://e.org/doc.xml", selector),
            target_href: format!("t.xml?x=1&y=\"{link}\""),
            title: None,
            arcrole: iri("http://e.org/role"),
            link_id: iri(&format!("http://e.org/{link}")),
        }
    }

    #[test]
    fn plan_link1() {
        let (lb, sel) = fixture();
        let plan = plan_decorations(&iri("http://e.org/vet/hamster-diseases.xml"), &[sel], &lb).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(plan[0].target_href, "hay-fever-handbook.xml");
        assert_eq!(plan[0].title.as_deref(), Some("For freshman"));
        assert_eq!(plan[0].arcrole.as_iri(), Some(vocab::MIR_BACKGROUND_INFO));
        assert!(plan_decorations(&iri("http://e.org/x"), &[], &lb).unwrap().is_empty());
    }

    #[test]
    fn plan_errors() {
        let (lb, sel) = fixture();
        assert!(matches!(
            plan_decorations(&iri("http://e.org/vet/other.xml"), std::slice::from_ref(&sel), &lb),
            Err(RenderError::ForeignAnchor { .. })
        ));
        assert!(matches!(
            plan_decorations(&iri("http://e.org/vet/hamster-diseases.xml"), &[sel], &Linkbase::default()),
            Err(RenderError::UnknownAnchor(_))
        ));
    }

    #[test]
    fn cross_host_target_stays_absolute() {
        let doc = iri("http://e.org/vet/a.xml");
        let target = anchor("http://x.org/#t", "http://x.org/b.xml", Selector::ShorthandId("s".into()));
        assert_eq!(relative_href(&doc, &target), "http://x.org/b.xml#s");
        let sub = anchor("http://e.org/#t", "http://e.org/vet/sub/b.xml", Selector::ElementPath(vec![1, 2]));
        assert_eq!(relative_href(&doc, &sub), "sub/b.xml#element(/1/2)");
    }

    #[test]
    fn wraps_hayfever() {
        let (lb, sel) = fixture();
        let plan = plan_decorations(&iri("http://e.org/vet/hamster-diseases.xml"), &[sel], &lb).unwrap();
        let out = decorate(DOC, &plan).unwrap();
        assert!(out.contains(
            r#"<a href="hay-fever-handbook.xml" title="For freshman" data-arcrole="http://www.rz.fhtw-berlin.de/MIR#BackgroundInfo" data-link="http://e.org/vet/#Link1"><em id="hayfever">hay fever</em></a>"#
        ));
        roxmltree::Document::parse(&out).unwrap();
    }

    #[test]
    fn zero_decorations_is_identity() {
        assert_eq!(decorate(DOC, &[]).unwrap(), DOC);
    }

    #[test]
    fn same_element_nests_in_list_order() {
        let ds = [decoration(Selector::ShorthandId("second".into()), "one"), decoration(Selector::ShorthandId("second".into()), "two")];
        let out = decorate(DOC, &ds).unwrap();
        let one = out.find("data-link=\"http://e.org/one\"").unwrap();
        let two = out.find("data-link=\"http://e.org/two\"").unwrap();
        assert!(one < two);
        assert!(out.contains("</p></a></a></body>"));
        roxmltree::Document::parse(&out).unwrap();
    }

    #[test]
    fn adjacent_and_nested_elements() {
        let doc = "<r><x><y/></x><z/></r>";
        let ds = [
            decoration(Selector::element_path("/1").unwrap(), "x"),
            decoration(Selector::element_path("/1/1").unwrap(), "y"),
            decoration(Selector::element_path("/2").unwrap(), "z"),
            decoration(Selector::WholeResource, "r"),
        ];
        let out = decorate(doc, &ds).unwrap();
        let parsed = roxmltree::Document::parse(&out).unwrap();
        assert_eq!(parsed.root_element().tag_name().name(), "a");
        assert_eq!(parsed.descendants().filter(|n| n.attribute("data-link").is_some()).count(), 4);
        assert!(out.contains("&amp;y=&quot;z&quot;"));
    }

    #[test]
    fn unresolved_selector_fails() {
        let ds = [decoration(Selector::ShorthandId("absent".into()), "x")];
        assert!(matches!(decorate(DOC, &ds), Err(RenderError::Selector(AnchorError::NoMatch(_)))));
        assert!(matches!(decorate("not xml", &ds), Err(RenderError::Xml(_))));
    }
}
