use super::RdqlError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Select,
    Where,
    Using,
    For,
    Star,
    Comma,
    LParen,
    RParen,
    /// `?name`, stored without the `?`.
    Var(String),
    /// Content of `<...>`: an absolute IRI or a qualified name.
    Angle(String),
    /// Bare `prefix:local`.
    QName(String),
    /// Bare word that is not a keyword, e.g. a prefix name.
    Ident(String),
    Str { value: String, language: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character.
    pub offset: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':')
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, RdqlError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    let lex_err = |offset, message: &str| RdqlError::Lex { offset, message: message.to_owned() };

    while let Some(&(offset, c)) = chars.peek() {
        let kind = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '*' | ',' | '(' | ')' => {
                chars.next();
                match c {
                    '*' => TokenKind::Star,
                    ',' => TokenKind::Comma,
                    '(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                }
            }
            '?' => {
                chars.next();
                let mut name = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| c.is_alphanumeric() || c == '_') {
                    name.push(c);
                }
                if name.is_empty() {
                    return Err(lex_err(offset, "empty variable name"));
                }
                TokenKind::Var(name)
            }
            '<' => {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((_, c)) if c.is_whitespace() || c == '<' => {
                            return Err(lex_err(offset, "unterminated <...>"));
                        }
                        Some((_, c)) => body.push(c),
                        None => return Err(lex_err(offset, "unterminated <...>")),
                    }
                }
                TokenKind::Angle(body)
            }
            '"' | '\'' => {
                chars.next();
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some((_, q)) if q == c => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, 'n')) => value.push('\n'),
                            Some((_, 't')) => value.push('\t'),
                            Some((_, 'r')) => value.push('\r'),
                            Some((_, e @ ('"' | '\'' | '\\'))) => value.push(e),
                            Some((i, _)) => return Err(lex_err(i, "invalid escape")),
                            None => return Err(lex_err(offset, "unterminated string")),
                        },
                        Some((_, ch)) => value.push(ch),
                        None => return Err(lex_err(offset, "unterminated string")),
                    }
                }
                let language = if chars.next_if(|&(_, c)| c == '@').is_some() {
                    let mut lang = String::new();
                    while let Some((_, c)) = chars.next_if(|&(_, c)| c.is_ascii_alphanumeric() || c == '-') {
                        lang.push(c);
                    }
                    if lang.is_empty() {
                        return Err(lex_err(offset, "empty language tag"));
                    }
                    Some(lang)
                } else {
                    None
                };
                TokenKind::Str { value, language }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| is_word_char(c)) {
                    word.push(c);
                }
                match word.to_ascii_uppercase().as_str() {
                    "SELECT" => TokenKind::Select,
                    "WHERE" => TokenKind::Where,
                    "USING" => TokenKind::Using,
                    "FOR" => TokenKind::For,
                    _ if word.contains(':') => TokenKind::QName(word),
                    _ => TokenKind::Ident(word),
                }
            }
            other => return Err(lex_err(offset, &format!("unexpected character '{other}'"))),
        };
        tokens.push(Token { kind, offset });
    }
    Ok(tokens)
}
