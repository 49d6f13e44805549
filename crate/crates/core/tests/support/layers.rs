//! Scans module sources for `crate::` references.

use std::collections::BTreeSet;
use std::path::Path;

/// Top-level modules named by `crate::` paths, including grouped imports.
pub fn crate_refs(source: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (i, _) in source.match_indices("crate::") {
        let before = source[..i].chars().last();
        if before.is_some_and(|c| c.is_alphanumeric() || c == '_') {
            continue;
        }
        let rest = &source[i + "crate::".len()..];
        if let Some(group) = rest.strip_prefix('{') {
            let mut depth = 1;
            let mut expect_name = true;
            for (j, c) in group.char_indices() {
                match c {
                    '{' => depth += 1,
                    '}' if depth == 1 => break,
                    '}' => depth -= 1,
                    ',' if depth == 1 => expect_name = true,
                    c if expect_name && (c.is_alphanumeric() || c == '_') => {
                        let name: String = group[j..].chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
                        out.insert(name);
                        expect_name = false;
                    }
                    _ => {}
                }
            }
        } else {
            let name: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
            out.insert(name);
        }
    }
    out
}

pub fn module_refs(module: &str) -> BTreeSet<String> {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/src");
    let file = src.join(format!("{module}.rs"));
    let mut text = String::new();
    if file.exists() {
        text = std::fs::read_to_string(file).unwrap();
    } else {
        for entry in std::fs::read_dir(src.join(module)).unwrap() {
            text.push_str(&std::fs::read_to_string(entry.unwrap().path()).unwrap());
        }
    }
    let mut refs = crate_refs(&text);
    refs.remove(module);
    refs
}
