use std::fmt;

use indexmap::IndexMap;

use super::lexer::{tokenize, Token, TokenKind};
use super::RdqlError;
use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    All,
    Vars(Vec<String>),
}

/// A query position before prefix resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryTerm {
    Var(String),
    /// `<...>` content, resolved at evaluation.
    Angle(String),
    /// Bare `prefix:local`.
    QName(String),
    Literal { value: String, language: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryPattern {
    pub subject: QueryTerm,
    pub predicate: QueryTerm,
    pub object: QueryTerm,
}

impl QueryPattern {
    pub fn terms(&self) -> [&QueryTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub projection: Projection,
    pub patterns: Vec<QueryPattern>,
    /// Prefix name to namespace IRI, in declaration order.
    pub prefixes: IndexMap<String, String>,
}

impl Query {
    /// Variables in order of first appearance across the patterns.
    pub fn pattern_variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = Vec::new();
        for term in self.patterns.iter().flat_map(QueryPattern::terms) {
            if let QueryTerm::Var(v) = term {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars
    }

    /// The variables a result binding carries.
    pub fn result_variables(&self) -> Vec<String> {
        match &self.projection {
            Projection::All => self.pattern_variables(),
            Projection::Vars(vars) => vars.clone(),
        }
    }
}

pub fn parse_query(text: &str) -> Result<Query, RdqlError> {
    let tokens = tokenize(text)?;
    Parser { tokens: &tokens, pos: 0, end: text.len() }.query()
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn error(&self, message: impl Into<String>) -> RdqlError {
        RdqlError::Parse { offset: self.offset(), message: message.into() }
    }

    fn next(&mut self) -> Option<&TokenKind> {
        let tok = self.tokens.get(self.pos).map(|t| &t.kind);
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), RdqlError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn query(mut self) -> Result<Query, RdqlError> {
        self.expect(&TokenKind::Select, "SELECT")?;
        let projection = self.projection()?;
        self.expect(&TokenKind::Where, "WHERE")?;

        let mut patterns = vec![self.pattern()?];
        loop {
            let checkpoint = self.pos;
            self.eat(&TokenKind::Comma);
            if self.peek() == Some(&TokenKind::LParen) {
                patterns.push(self.pattern()?);
            } else {
                self.pos = checkpoint;
                break;
            }
        }

        let mut prefixes = IndexMap::new();
        if self.eat(&TokenKind::Using) {
            loop {
                let name = match self.next() {
                    Some(TokenKind::Ident(name)) => name.clone(),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected prefix name"));
                    }
                };
                self.expect(&TokenKind::For, "FOR")?;
                let ns = match self.next() {
                    Some(TokenKind::Angle(ns)) => ns.clone(),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected <namespace IRI>"));
                    }
                };
                prefixes.insert(name, ns);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        if self.peek().is_some() {
            return Err(self.error("unexpected trailing input"));
        }

        let query = Query { projection, patterns, prefixes };
        if let Projection::Vars(vars) = &query.projection {
            let present = query.pattern_variables();
            if let Some(missing) = vars.iter().find(|v| !present.contains(v)) {
                return Err(RdqlError::Parse {
                    offset: 0,
                    message: format!("projected variable ?{missing} does not occur in any pattern"),
                });
            }
        }
        Ok(query)
    }

    fn projection(&mut self) -> Result<Projection, RdqlError> {
        if self.eat(&TokenKind::Star) {
            return Ok(Projection::All);
        }
        let mut vars = Vec::new();
        while let Some(TokenKind::Var(v)) = self.peek() {
            vars.push(v.clone());
            self.pos += 1;
            if self.eat(&TokenKind::Comma) && !matches!(self.peek(), Some(TokenKind::Var(_))) {
                return Err(self.error("expected variable after ','"));
            }
        }
        if vars.is_empty() {
            return Err(self.error("expected '*' or variable list"));
        }
        Ok(Projection::Vars(vars))
    }

    fn pattern(&mut self) -> Result<QueryPattern, RdqlError> {
        if self.peek() != Some(&TokenKind::LParen) {
            return Err(self.error("expected triple pattern"));
        }
        self.pos += 1;
        let subject = self.term()?;
        self.expect(&TokenKind::Comma, "','")?;
        let predicate = self.term()?;
        self.expect(&TokenKind::Comma, "','")?;
        let object = self.term()?;
        self.expect(&TokenKind::RParen, "')'")?;
        Ok(QueryPattern { subject, predicate, object })
    }

    fn term(&mut self) -> Result<QueryTerm, RdqlError> {
        let term = match self.peek() {
            Some(TokenKind::Var(v)) => QueryTerm::Var(v.clone()),
            Some(TokenKind::Angle(a)) => QueryTerm::Angle(a.clone()),
            Some(TokenKind::QName(q)) => QueryTerm::QName(q.clone()),
            Some(TokenKind::Str { value, language }) => {
                QueryTerm::Literal { value: value.clone(), language: language.clone() }
            }
            _ => return Err(self.error("expected variable, <IRI>, qualified name or string")),
        };
        self.pos += 1;
        Ok(term)
    }
}

impl fmt::Display for QueryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryTerm::Var(v) => write!(f, "?{v}"),
            QueryTerm::Angle(a) => write!(f, "<{a}>"),
            QueryTerm::QName(q) => f.write_str(q),
            QueryTerm::Literal { value, language } => {
                f.write_str("\"")?;
                for c in value.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")?;
                match language {
                    Some(lang) => write!(f, "@{lang}"),
                    None => Ok(()),
                }
            }
        }
    }
}

impl fmt::Display for QueryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        match &self.projection {
            Projection::All => f.write_str("*")?,
            Projection::Vars(vars) => {
                let list: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
                f.write_str(&list.join(", "))?;
            }
        }
        f.write_str(" WHERE ")?;
        let patterns: Vec<String> = self.patterns.iter().map(ToString::to_string).collect();
        f.write_str(&patterns.join(", "))?;
        if !self.prefixes.is_empty() {
            let decls: Vec<String> = self.prefixes.iter().map(|(p, ns)| format!("{p} FOR <{ns}>")).collect();
            write!(f, " USING {}", decls.join(", "))?;
        }
        Ok(())
    }
}

impl QueryTerm {
    /// Resolves a constant position against the prefix map. Angle content
    /// whose prefix is declared expands; otherwise `scheme://…` and `urn:…`
    /// are taken as absolute IRIs and anything else needs a declaration.
    pub(crate) fn resolve(&self, prefixes: &IndexMap<String, String>) -> Result<Option<Term>, RdqlError> {
        let invalid = |e: crate::rdf::RdfError| RdqlError::InvalidTerm(e.to_string());
        match self {
            QueryTerm::Var(_) => Ok(None),
            QueryTerm::Literal { value, language } => Ok(Some(Term::Literal {
                value: value.clone(),
                language: language.clone(),
            })),
            QueryTerm::QName(q) => expand(q, prefixes)?.map(Some).ok_or_else(|| undeclared(q)),
            QueryTerm::Angle(a) => {
                if let Some(term) = expand(a, prefixes)? {
                    return Ok(Some(term));
                }
                let literal_iri = a.split_once(':').is_some_and(|(scheme, rest)| {
                    rest.starts_with("//") || scheme.eq_ignore_ascii_case("urn")
                });
                if literal_iri {
                    Term::iri(a.clone()).map(Some).map_err(invalid)
                } else if a.contains(':') {
                    Err(undeclared(a))
                } else {
                    Err(RdqlError::InvalidTerm(format!("<{a}> is neither an absolute IRI nor a qualified name")))
                }
            }
        }
    }
}

fn undeclared(qname: &str) -> RdqlError {
    RdqlError::UndeclaredPrefix(qname.split_once(':').map_or(qname, |(p, _)| p).to_owned())
}

fn expand(qname: &str, prefixes: &IndexMap<String, String>) -> Result<Option<Term>, RdqlError> {
    let Some((prefix, local)) = qname.split_once(':') else {
        return Ok(None);
    };
    match prefixes.get(prefix) {
        // plain concatenation, no separator inserted
        Some(ns) => Term::iri(format!("{ns}{local}"))
            .map(Some)
            .map_err(|e| RdqlError::InvalidTerm(e.to_string())),
        None => Ok(None),
    }
}
