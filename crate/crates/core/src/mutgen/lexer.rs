//! Lossless lexer for C-family source text.
//!
//! The lexer never drops input: every byte ends up in exactly one token, so
//! concatenating token texts reproduces the source. Literals and comments are
//! opaque single tokens, which is what keeps mutation away from them.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Identifier,
    NumberLiteral,
    StringLiteral,
    CharLiteral,
    Operator,
    Punctuation,
    Comment,
    Whitespace,
}

impl TokenKind {
    /// Whitespace and comments carry no syntax.
    pub fn is_trivia(self) -> bool {
        matches!(self, TokenKind::Whitespace | TokenKind::Comment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub byte_offset: usize,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn end(&self) -> usize {
        self.byte_offset + self.text.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Lexed<'a> {
    pub tokens: Vec<Token<'a>>,
    pub diagnostics: Vec<LexDiagnostic>,
}

/// Operator lexemes, longest first so the first prefix match is the maximal munch.
pub(crate) const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "++", "--", "&&", "||", "==", "!=", ">=", "<=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "&", "|", "^", "!", "~",
    "<", ">", "=", "?", ":",
];

const PUNCTUATION: &[&str] = &[
    "...", "::", "->", "(", ")", "[", "]", "{", "}", ",", ";", ".", "@",
];

pub fn tokenize(source: &str) -> Lexed<'_> {
    Lexer::new(source).run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    out: Lexed<'a>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            column: 1,
            out: Lexed::default(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn run(mut self) -> Lexed<'a> {
        while self.pos < self.src.len() {
            let (kind, len) = self.scan();
            self.emit(kind, len);
        }
        self.out
    }

    fn emit(&mut self, kind: TokenKind, len: usize) {
        let text = &self.src[self.pos..self.pos + len];
        self.out.tokens.push(Token {
            kind,
            text,
            byte_offset: self.pos,
            line: self.line,
            column: self.column,
        });
        for ch in text.chars() {
            if ch == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        self.pos += len;
    }

    fn diagnose(&mut self, message: impl Into<String>) {
        self.out.diagnostics.push(LexDiagnostic {
            line: self.line,
            column: self.column,
            message: message.into(),
        });
    }

    fn scan(&mut self) -> (TokenKind, usize) {
        let rest = self.rest();
        let first = rest.chars().next().expect("scan past end");

        if first.is_whitespace() {
            let len = rest
                .char_indices()
                .find(|(_, c)| !c.is_whitespace())
                .map_or(rest.len(), |(i, _)| i);
            return (TokenKind::Whitespace, len);
        }
        if rest.starts_with("//") {
            let len = rest.find('\n').unwrap_or(rest.len());
            return (TokenKind::Comment, len);
        }
        if let Some(body) = rest.strip_prefix("/*") {
            return match body.find("*/") {
                Some(i) => (TokenKind::Comment, i + 4),
                None => {
                    self.diagnose("unterminated block comment");
                    (TokenKind::Comment, rest.len())
                }
            };
        }
        if let Some(body) = rest.strip_prefix("\"\"\"") {
            return match body.find("\"\"\"") {
                Some(i) => (TokenKind::StringLiteral, i + 6),
                None => {
                    self.diagnose("unterminated text block");
                    (TokenKind::StringLiteral, rest.len())
                }
            };
        }
        if first == '"' {
            return self.quoted('"', TokenKind::StringLiteral);
        }
        if first == '\'' {
            return self.quoted('\'', TokenKind::CharLiteral);
        }
        if first.is_ascii_digit()
            || (first == '.' && rest[1..].starts_with(|c: char| c.is_ascii_digit()))
        {
            return (TokenKind::NumberLiteral, number_len(rest));
        }
        if is_ident_start(first) {
            let len = rest
                .char_indices()
                .find(|(_, c)| !is_ident_continue(*c))
                .map_or(rest.len(), |(i, _)| i);
            return (TokenKind::Identifier, len);
        }
        if let Some(p) = PUNCTUATION.iter().find(|p| rest.starts_with(**p)) {
            // "..." and "::" must win over the "." and ":" fallbacks below
            if let Some(op) = OPERATORS.iter().find(|o| rest.starts_with(**o)) {
                if op.len() > p.len() {
                    return (TokenKind::Operator, op.len());
                }
            }
            return (TokenKind::Punctuation, p.len());
        }
        if let Some(op) = OPERATORS.iter().find(|o| rest.starts_with(**o)) {
            return (TokenKind::Operator, op.len());
        }
        (TokenKind::Punctuation, first.len_utf8())
    }

    fn quoted(&mut self, quote: char, kind: TokenKind) -> (TokenKind, usize) {
        let rest = self.rest();
        let mut escaped = false;
        for (i, c) in rest.char_indices().skip(1) {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == quote {
                return (kind, i + 1);
            }
        }
        self.diagnose(format!(
            "unterminated {} literal; remainder of file kept as one token",
            if quote == '"' { "string" } else { "char" }
        ));
        (kind, rest.len())
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

/// Length of a numeric literal, including exponent signs (`1e-5`, `0x1p+3`).
fn number_len(rest: &str) -> usize {
    let bytes = rest.as_bytes();
    let hex = bytes.len() > 1 && bytes[0] == b'0' && matches!(bytes[1], b'x' | b'X');
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let exponent = if hex {
            matches!(b, b'p' | b'P')
        } else {
            matches!(b, b'e' | b'E')
        };
        if exponent && i + 1 < bytes.len() && matches!(bytes[i + 1], b'+' | b'-') {
            i += 2;
        } else if b.is_ascii_alphanumeric()
            || b == b'_'
            || (b == b'.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            i += 1;
        } else if b == b'.' && i + 1 < bytes.len() && bytes[i + 1] == b'.' {
            break;
        } else if b == b'.' && !hex {
            // trailing-dot float such as `1.`
            let next = bytes.get(i + 1).copied();
            if next.is_some_and(|n| n.is_ascii_alphabetic() || n == b'_') {
                break;
            }
            i += 1;
        } else {
            break;
        }
    }
    i.max(1)
}
