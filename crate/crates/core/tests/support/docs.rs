//! Random element trees, a naive path walker, and the unwrap oracle for
//! decorated output.

use proptest::prelude::*;
use semlink::anchor::Selector;
use semlink::render::{decorate, Decoration};
use semlink::{Anchor, Term};

#[derive(Debug, Clone)]
pub struct El {
    pub name: String,
    pub id: Option<String>,
    pub text: String,
    pub children: Vec<El>,
}

pub fn element_strategy() -> impl Strategy<Value = El> {
    let leaf = ("[a-z]{1,4}", "[a-zA-Z &<>\"']{0,8}").prop_map(|(name, text)| El { name, id: None, text, children: vec![] });
    leaf.prop_recursive(4, 40, 5, |inner| {
        ("[a-z]{1,4}", "[a-zA-Z &<>]{0,6}", prop::collection::vec(inner, 0..5))
            .prop_map(|(name, text, children)| El { name, id: None, text, children })
    })
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn assign_ids(el: &mut El, next: &mut usize) {
    el.id = Some(format!("n{next}"));
    *next += 1;
    for c in &mut el.children {
        assign_ids(c, next);
    }
}

pub fn write(el: &El, out: &mut String) {
    out.push('<');
    out.push_str(&el.name);
    if let Some(id) = &el.id {
        out.push_str(&format!(" id=\"{id}\""));
    }
    if el.children.is_empty() && el.text.is_empty() {
        out.push_str("/>");
        return;
    }
    out.push('>');
    out.push_str(&escape(&el.text));
    for c in &el.children {
        write(c, out);
        out.push_str("\n  ");
    }
    out.push_str(&format!("</{}>", el.name));
}

/// Naive recursive descent over the generated structure.
pub fn walk<'a>(root: &'a El, path: &[usize]) -> Option<&'a El> {
    match path.split_first() {
        None => Some(root),
        Some((&step, rest)) => root.children.get(step.checked_sub(1)?).and_then(|c| walk(c, rest)),
    }
}

pub fn all_paths(el: &El, prefix: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, c) in el.children.iter().enumerate() {
        let mut p = prefix.clone();
        p.push(i + 1);
        all_paths(c, p, out);
    }
}

/// (name, attributes, text-or-children) tree with `a[data-link]` wrappers spliced out.
#[derive(Debug, PartialEq)]
pub enum Node {
    El(String, Vec<(String, String)>, Vec<Node>),
    Text(String),
}

pub fn unwrap_tree(node: roxmltree::Node) -> Vec<Node> {
    if node.is_text() {
        return vec![Node::Text(node.text().unwrap().to_owned())];
    }
    if !node.is_element() {
        return vec![];
    }
    let children: Vec<Node> = node.children().flat_map(unwrap_tree).collect();
    if node.tag_name().name() == "a" && node.attribute("data-link").is_some() {
        return children;
    }
    let attrs = node.attributes().map(|a| (a.name().to_owned(), a.value().to_owned())).collect();
    vec![Node::El(node.tag_name().name().to_owned(), attrs, children)]
}

pub fn char_data(xml: &str) -> String {
    let doc = roxmltree::Document::parse(xml).unwrap();
    doc.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect()
}

pub fn decoration(selector: Selector, i: usize) -> Decoration {
    Decoration {
        anchor: Anchor {
            id: Term::Iri(format!("http://e.org/#a{i}")),
            resource: Term::Iri("http://e.org/doc.xml".into()),
            selector,
            title: i.is_multiple_of(2).then(|| format!("title \"{i}\" & more")),
            label: None,
        },
        target_href: format!("target{i}.xml#x"),
        title: i.is_multiple_of(2).then(|| format!("title \"{i}\" & more")),
        arcrole: Term::Iri("http://e.org/role".into()),
        link_id: Term::Iri(format!("http://e.org/#link{i}")),
    }
}


/// Decorates a generated document at the picked elements, then checks that
/// unwrapping the inserted elements gives back the original tree and text.
pub fn reversibility_case(mut root: El, picks: &[(prop::sample::Index, bool)]) -> Result<(), String> {
    let mut next = 0;
    assign_ids(&mut root, &mut next);
    let mut xml = String::from("<?xml version=\"1.0\"?>\n");
    write(&root, &mut xml);
    let mut paths = Vec::new();
    all_paths(&root, vec![], &mut paths);

    let decorations: Vec<Decoration> = picks
        .iter()
        .enumerate()
        .map(|(i, (idx, by_id))| {
            let path = idx.get(&paths);
            let selector = match (*by_id, path.is_empty()) {
                (_, true) => Selector::WholeResource,
                (true, false) => Selector::ShorthandId(walk(&root, path).unwrap().id.clone().unwrap()),
                (false, false) => Selector::ElementPath(path.clone()),
            };
            decoration(selector, i)
        })
        .collect();

    let out = decorate(&xml, &decorations).map_err(|e| e.to_string())?;
    let before = roxmltree::Document::parse(&xml).map_err(|e| e.to_string())?;
    let after = roxmltree::Document::parse(&out).map_err(|e| format!("decorated output is not XML: {e}"))?;
    if unwrap_tree(after.root_element()) != unwrap_tree(before.root_element()) {
        return Err(format!("unwrapped tree differs\n{xml}\n{out}"));
    }
    if char_data(&out) != char_data(&xml) {
        return Err(format!("character data differs\n{xml}\n{out}"));
    }
    let count = after.descendants().filter(|n| n.attribute("data-link").is_some()).count();
    if count != decorations.len() {
        return Err(format!("{count} wrappers for {} decorations", decorations.len()));
    }
    Ok(())
}
