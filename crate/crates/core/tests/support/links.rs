//! Single links with their endpoint anchors.

use proptest::prelude::*;
use semlink::anchor::Selector;
use semlink::link::{Direction, Link, Linkbase};
use semlink::{Anchor, Term};

pub fn link_strategy() -> impl Strategy<Value = (Linkbase, Link)> {
    (
        "[a-z]{1,8}",
        "[a-z]{1,8}",
        "[A-Za-z]{1,10}",
        prop::option::of("[ -~]{0,12}"),
        prop::option::of("[ -~]{0,12}"),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(from, to, role, title, creator, bi, self_link)| {
            let to = if self_link { from.clone() } else { to };
            let anchor = |name: &str| Anchor {
                id: Term::Iri(format!("http://e.org/lb#{name}")),
                resource: Term::Iri(format!("http://e.org/{name}.xml")),
                selector: Selector::WholeResource,
                title: None,
                label: None,
            };
            let mut anchors = vec![anchor(&from)];
            if to != from {
                anchors.push(anchor(&to));
            }
            let link = Link {
                id: Term::Iri("http://e.org/lb#L".into()),
                from: anchors[0].id.clone(),
                to: anchors.last().unwrap().id.clone(),
                arcrole: Some(Term::Iri(format!("http://e.org/roles#{role}"))),
                title,
                creator,
                direction: if bi { Direction::Bi } else { Direction::Uni },
            };
            (Linkbase { anchors, links: vec![link.clone()], ..Default::default() }, link)
        })
}

