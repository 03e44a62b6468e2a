//! Tokenizer shared by every text format of the toolkit.

use super::wf::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    Equals,
    Arrow,
    FatArrow,
    Turnstile,
    Wedge,
    Dot,
    Assign,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Wedge => "`/\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '*')
}

/// Whether `s` can be printed without quotes and read back as one identifier.
pub fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars().peekable();
    if s.is_empty() {
        return false;
    }
    while let Some(c) = chars.next() {
        if is_ident_char(c) {
            continue;
        }
        if c == '-' && chars.peek().is_some_and(|n| n.is_alphanumeric()) {
            continue;
        }
        return false;
    }
    !s.starts_with('-')
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! advance {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '#' || (c == '/' && next == Some('/')) {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        let (tok, len) = match (c, next) {
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('.', _) => (Tok::Dot, 1),
            (':', Some('=')) => (Tok::Assign, 2),
            (':', _) => (Tok::Colon, 1),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            ('=', _) => (Tok::Equals, 1),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('|', Some('-')) => (Tok::Turnstile, 2),
            ('/', Some('\\')) => (Tok::Wedge, 2),
            ('⊢', _) => (Tok::Turnstile, 1),
            ('∧', _) => (Tok::Wedge, 1),
            ('→', _) => (Tok::Arrow, 1),
            ('⊤', _) => (Tok::Ident("true".into()), 1),
            ('"', _) => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j] != '"' {
                    if chars[j] == '\n' {
                        return Err(ParseError::syntax(span, "unterminated string"));
                    }
                    s.push(chars[j]);
                    j += 1;
                }
                if j == chars.len() {
                    return Err(ParseError::syntax(span, "unterminated string"));
                }
                (Tok::Str(s), j + 1 - i)
            }
            (c, _) if is_ident_char(c) => {
                let mut j = i;
                let mut s = String::new();
                while j < chars.len() {
                    let d = chars[j];
                    let dash = d == '-' && chars.get(j + 1).is_some_and(|n| n.is_alphanumeric());
                    if is_ident_char(d) || (dash && j > i) {
                        s.push(d);
                        j += 1;
                    } else {
                        break;
                    }
                }
                (Tok::Ident(s), j - i)
            }
            (c, _) => return Err(ParseError::syntax(span, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, span });
        advance!(len);
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
