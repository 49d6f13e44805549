//! N-Triples reader and writer for the plain-literal profile.
//!
//! Output is one statement per line, LF-terminated. Typed literals are
//! rejected on input since the model has no datatype slot.

use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use super::{Graph, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn serialize(graph: &Graph) -> String {
    let mut out = String::new();
    for triple in graph {
        out.push_str(&triple.to_string());
        out.push('\n');
    }
    out
}

pub fn parse(text: &str) -> Result<Graph, ParseError> {
    let mut graph = Graph::new();
    for (idx, line) in text.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if let Some(triple) = LineParser::new(line, idx + 1).statement()? {
            graph.insert(triple);
        }
    }
    Ok(graph)
}

struct LineParser<'a> {
    src: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        LineParser { src, chars: src.char_indices().peekable(), line }
    }

    fn column(&mut self) -> usize {
        let offset = self.chars.peek().map_or(self.src.len(), |&(i, _)| i);
        self.src[..offset].chars().count() + 1
    }

    fn error(&mut self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|&(_, c)| c == ' ' || c == '\t').is_some() {}
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.chars.next();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of line"))),
        }
    }

    fn statement(&mut self) -> Result<Option<Triple>, ParseError> {
        self.skip_ws();
        if matches!(self.peek(), None | Some('#')) {
            return Ok(None);
        }
        let subject = self.term()?;
        if subject.is_literal() {
            return Err(ParseError { line: self.line, column: 1, message: "literal in subject position".into() });
        }
        self.skip_ws();
        let column = self.column();
        let predicate = self.term()?;
        if !predicate.is_iri() {
            return Err(ParseError { line: self.line, column, message: "predicate must be an IRI".into() });
        }
        self.skip_ws();
        let object = self.term()?;
        self.skip_ws();
        self.expect('.')?;
        self.skip_ws();
        match self.peek() {
            None | Some('#') => {}
            Some(_) => return Err(self.error("trailing content after '.'")),
        }
        Triple::new(subject, predicate, object).map(Some).map_err(|e| self.error(e.to_string()))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => self.iri(),
            Some('"') => self.literal(),
            Some('_') => self.blank(),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of line")),
        }
    }

    fn iri(&mut self) -> Result<Term, ParseError> {
        let column = self.column();
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.chars.next() {
                Some((_, '>')) => break,
                Some((_, '\\')) => value.push(self.unicode_escape()?),
                Some((_, c)) => value.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
        Term::iri(value).map_err(|e| ParseError { line: self.line, column, message: e.to_string() })
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let len = match self.chars.next() {
            Some((_, 'u')) => 4,
            Some((_, 'U')) => 8,
            _ => return Err(self.error("invalid escape in IRI")),
        };
        self.hex(len)
    }

    fn hex(&mut self, len: usize) -> Result<char, ParseError> {
        let mut code = 0u32;
        for _ in 0..len {
            let digit = self.peek().and_then(|c| c.to_digit(16)).ok_or_else(|| self.error("bad hex digit"))?;
            self.chars.next();
            code = code * 16 + digit;
        }
        char::from_u32(code).ok_or_else(|| self.error("escape is not a scalar value"))
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        self.expect('"')?;
        let mut value = String::new();
        loop {
            match self.chars.next() {
                Some((_, '"')) => break,
                Some((_, '\\')) => {
                    let c = match self.chars.next() {
                        Some((_, 't')) => '\t',
                        Some((_, 'b')) => '\u{8}',
                        Some((_, 'n')) => '\n',
                        Some((_, 'r')) => '\r',
                        Some((_, 'f')) => '\u{c}',
                        Some((_, '"')) => '"',
                        Some((_, '\'')) => '\'',
                        Some((_, '\\')) => '\\',
                        Some((_, 'u')) => self.hex(4)?,
                        Some((_, 'U')) => self.hex(8)?,
                        _ => return Err(self.error("invalid escape in literal")),
                    };
                    value.push(c);
                }
                Some((_, c)) => value.push(c),
                None => return Err(self.error("unterminated literal")),
            }
        }
        match self.peek() {
            Some('@') => {
                self.chars.next();
                let mut lang = String::new();
                while let Some((_, c)) = self.chars.next_if(|&(_, c)| c.is_ascii_alphanumeric() || c == '-') {
                    lang.push(c);
                }
                if lang.is_empty() || lang.starts_with('-') || lang.ends_with('-') {
                    return Err(self.error("malformed language tag"));
                }
                Ok(Term::lang_literal(value, lang))
            }
            Some('^') => Err(self.error("typed literals are not supported")),
            _ => Ok(Term::literal(value)),
        }
    }

    fn blank(&mut self) -> Result<Term, ParseError> {
        self.expect('_')?;
        self.expect(':')?;
        let column = self.column();
        let start = self.chars.peek().map_or(self.src.len(), |&(i, _)| i);
        let rest = &self.src[start..];
        let end = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.')))
            .map_or(rest.len(), |(i, _)| i);
        // A trailing '.' terminates the statement rather than the label.
        let label = rest[..end].trim_end_matches('.');
        while self.chars.next_if(|&(i, _)| i < start + label.len()).is_some() {}
        Term::blank(label).map_err(|e| ParseError { line: self.line, column, message: e.to_string() })
    }
}
