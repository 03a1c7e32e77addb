//! Tokenizer shared by the term, theory, model and category grammars.

use std::fmt;

use thiserror::Error;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            message: message.into(),
        }
    }

    pub(crate) fn at(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(pos.line, pos.col, message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Semi,
    Colon,
    Arrow,
    Eq,
    Leq,
    Dot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Leq => write!(f, "`<=`"),
            Tok::Dot => write!(f, "`.`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes a single line. `#` starts a comment.
pub(crate) fn tokenize_line(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: i + 1 };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token {
                tok: Tok::Arrow,
                pos,
            });
            i += 2;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'=') {
            out.push(Token { tok: Tok::Leq, pos });
            i += 2;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| ParseError::at(pos, format!("number `{digits}` is too large")))?;
            out.push(Token {
                tok: Tok::Num(n),
                pos,
            });
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        return Err(ParseError::at(pos, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Tokenizes every line, keeping line numbers; blank and comment-only lines
/// are dropped.
pub(crate) fn tokenize_lines(text: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let toks = tokenize_line(raw, idx + 1)?;
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    Ok(lines)
}

/// A cursor over one line of tokens.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    idx: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        let end = toks
            .last()
            .map(|t| Pos {
                line: t.pos.line,
                col: t.pos.col + 1,
            })
            .unwrap_or(Pos { line: 1, col: 1 });
        Self { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.idx)
    }

    pub fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    pub fn pos(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.idx);
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, ParseError> {
        let pos = self.pos();
        if self.eat(tok) {
            Ok(pos)
        } else {
            Err(self.unexpected(&format!("expected {tok}")))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                pos,
            }) => {
                self.idx += 1;
                Ok((s.clone(), *pos))
            }
            _ => Err(self.unexpected(&format!("expected {what}"))),
        }
    }

    pub fn number(&mut self, what: &str) -> Result<(usize, Pos), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Num(n),
                pos,
            }) => {
                self.idx += 1;
                Ok((*n, *pos))
            }
            _ => Err(self.unexpected(&format!("expected {what}"))),
        }
    }

    pub fn unexpected(&self, message: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::at(t.pos, format!("{message}, found {}", t.tok)),
            None => ParseError::at(self.end, format!("{message}, found end of line")),
        }
    }

    pub fn rest(&self) -> &'a [Token] {
        &self.toks[self.idx..]
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("unexpected trailing input"))
        }
    }
}
