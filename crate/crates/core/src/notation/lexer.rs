use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Nabla,
    Dyad,
    Dot,
    Wedge,
    Cross,
    Dagger,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Ident(String),
    Number(f64),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Nabla => f.write_str("∇"),
            TokenKind::Dyad => f.write_str("⊗"),
            TokenKind::Dot => f.write_str("·"),
            TokenKind::Wedge => f.write_str("∧"),
            TokenKind::Cross => f.write_str("×"),
            TokenKind::Dagger => f.write_str("†"),
            TokenKind::Plus => f.write_str("+"),
            TokenKind::Minus => f.write_str("-"),
            TokenKind::Star => f.write_str("*"),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::Ident(name) => f.write_str(name),
            TokenKind::Number(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("unexpected character {ch:?}")]
    UnexpectedChar { ch: char, offset: usize },
    #[error("number out of range")]
    NumberOutOfRange { offset: usize },
}

impl LexError {
    pub fn offset(&self) -> usize {
        match self {
            LexError::UnexpectedChar { offset, .. } | LexError::NumberOutOfRange { offset } => *offset,
        }
    }
}

/// Splits an expression into tokens.
///
/// Unicode operators and their ASCII spellings are interchangeable:
/// `∇`/`grad`, `⊗`/`(x)`, `·`/`.`, `∧`/`^`, `×`/`cross`, `†`/`'`.
/// The three characters `(x)` always lex as the dyad operator.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(offset, ch)) = chars.peek() {
        let single = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '∇' => Some(TokenKind::Nabla),
            '⊗' => Some(TokenKind::Dyad),
            '·' | '⋅' | '.' => Some(TokenKind::Dot),
            '∧' | '^' => Some(TokenKind::Wedge),
            '×' => Some(TokenKind::Cross),
            '†' | '\'' => Some(TokenKind::Dagger),
            '+' => Some(TokenKind::Plus),
            '-' | '−' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            ')' => Some(TokenKind::RParen),
            '(' if src[offset..].starts_with("(x)") => {
                chars.next();
                chars.next();
                Some(TokenKind::Dyad)
            }
            '(' => Some(TokenKind::LParen),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            tokens.push(Token { kind, offset });
            continue;
        }

        if ch.is_ascii_digit() {
            let end = number_end(src, offset);
            let value: f64 = src[offset..end].parse().expect("lexed number literal");
            if !value.is_finite() {
                return Err(LexError::NumberOutOfRange { offset });
            }
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            tokens.push(Token {
                kind: TokenKind::Number(value),
                offset,
            });
        } else if ch.is_alphabetic() || ch == '_' {
            let mut end = offset;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let kind = match &src[offset..end] {
                "grad" => TokenKind::Nabla,
                "cross" => TokenKind::Cross,
                name => TokenKind::Ident(name.to_string()),
            };
            tokens.push(Token { kind, offset });
        } else {
            return Err(LexError::UnexpectedChar { ch, offset });
        }
    }
    Ok(tokens)
}

/// End of a numeric literal `digits ('.' digits)? ([eE] [+-]? digits)?`.
fn number_end(src: &str, start: usize) -> usize {
    let bytes = src.as_bytes();
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut end = digits(start);
    if end + 1 < bytes.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
        end = digits(end + 1);
    }
    if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
        let mut i = end + 1;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        if i < bytes.len() && bytes[i].is_ascii_digit() {
            end = digits(i);
        }
    }
    end
}
