//! Recursive-descent parser for Gibbsian notation.
//!
//! ```text
//! sum     := neg (('+' | '-') neg)*
//! neg     := '-' neg | scaled
//! scaled  := product ('*' product)*
//! product := postfix (op postfix)*        op ∈ {⊗, ·, ∧, ×}, all the same op
//! postfix := primary '†'*
//! primary := '∇' '(' sum ')' | '∇' | ident | number | '(' sum ')'
//! ```
//!
//! Mixing different product operators without parentheses is an error:
//! `dr · ∇⊗v` is rejected, `dr · (∇⊗v)` is accepted.

use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, LexError, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Dyad,
    Dot,
    Wedge,
    Cross,
    Add,
    Sub,
    ScalarMul,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Dyad => "⊗",
            BinaryOp::Dot => "·",
            BinaryOp::Wedge => "∧",
            BinaryOp::Cross => "×",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::ScalarMul => "*",
        }
    }

    fn product(kind: &TokenKind) -> Option<BinaryOp> {
        match kind {
            TokenKind::Dyad => Some(BinaryOp::Dyad),
            TokenKind::Dot => Some(BinaryOp::Dot),
            TokenKind::Wedge => Some(BinaryOp::Wedge),
            TokenKind::Cross => Some(BinaryOp::Cross),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Nabla,
    Var(String),
    Scalar(f64),
    Transpose(Box<Expr>),
    Negate(Box<Expr>),
    /// `∇(s)` applied to a scalar-valued operand.
    Grad(Box<Expr>),
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    fn is_atom(&self) -> bool {
        matches!(
            self,
            Expr::Nabla | Expr::Var(_) | Expr::Scalar(_) | Expr::Transpose(_) | Expr::Grad(_)
        )
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

/// Unicode rendering, parenthesized so that it reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Nabla => f.write_str("∇"),
            Expr::Var(name) => f.write_str(name),
            Expr::Scalar(x) => write!(f, "{x}"),
            Expr::Transpose(inner) => {
                inner.fmt_operand(f)?;
                f.write_str("†")
            }
            Expr::Negate(inner) => {
                f.write_str("-")?;
                inner.fmt_operand(f)
            }
            // `(x)` would lex as the dyad operator.
            Expr::Grad(inner) if matches!(&**inner, Expr::Var(n) if n == "x") => f.write_str("∇( x )"),
            Expr::Grad(inner) => write!(f, "∇({inner})"),
            Expr::Binary { op, lhs, rhs } => {
                lhs.fmt_operand(f)?;
                write!(f, " {} ", op.symbol())?;
                rhs.fmt_operand(f)
            }
        }
    }
}

/// A parse failure; [`ParseError::offset`] is the byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("operator {second} follows {first} without parentheses")]
    MixedOperators {
        first: &'static str,
        first_offset: usize,
        second: &'static str,
        offset: usize,
    },
    #[error("unclosed parenthesis")]
    UnclosedParen { offset: usize },
    #[error("unmatched ')'")]
    UnmatchedParen { offset: usize },
    #[error("unexpected {found}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
        offset: usize,
    },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str, offset: usize },
}

impl ParseError {
    /// Byte offset in the source that the error points at.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Lex(e) => e.offset(),
            ParseError::MixedOperators { offset, .. }
            | ParseError::UnclosedParen { offset }
            | ParseError::UnmatchedParen { offset }
            | ParseError::Unexpected { offset, .. }
            | ParseError::UnexpectedEnd { offset, .. } => *offset,
        }
    }
}

/// Source offsets of an [`Expr`] tree, mirroring its shape.
///
/// `offset` is the byte offset of the node's defining token: the operator
/// of a binary or unary node, the name or number of a leaf, and `∇` for a
/// gradient. `children` follow the order of the node's operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub offset: usize,
    pub children: Vec<Span>,
}

impl Span {
    fn leaf(offset: usize) -> Span {
        Span {
            offset,
            children: Vec::new(),
        }
    }

    fn node(offset: usize, children: Vec<Span>) -> Span {
        Span { offset, children }
    }

    /// Offset of the node reached by following child indices from the root.
    /// Stops at the deepest node that exists.
    pub fn locate(&self, path: &[usize]) -> usize {
        let mut span = self;
        for &k in path {
            match span.children.get(k) {
                Some(child) => span = child,
                None => break,
            }
        }
        span.offset
    }
}

/// Tokenizes and parses `src`.
pub fn parse_str(src: &str) -> Result<Expr, ParseError> {
    parse_spanned(src).map(|(expr, _)| expr)
}

/// Tokenizes and parses `src`, keeping the source offset of every node.
pub fn parse_spanned(src: &str) -> Result<(Expr, Span), ParseError> {
    let tokens = tokenize(src)?;
    parse_tokens(&tokens, src.len())
}

/// Parses a token stream. `end_offset` is reported for errors at end of input.
pub fn parse(tokens: &[Token], end_offset: usize) -> Result<Expr, ParseError> {
    parse_tokens(tokens, end_offset).map(|(expr, _)| expr)
}

fn parse_tokens(tokens: &[Token], end_offset: usize) -> Result<(Expr, Span), ParseError> {
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset,
    };
    let parsed = parser.sum()?;
    match parser.peek() {
        None => Ok(parsed),
        Some(Token {
            kind: TokenKind::RParen,
            offset,
        }) => Err(ParseError::UnmatchedParen { offset: *offset }),
        Some(tok) => Err(ParseError::Unexpected {
            found: tok.kind.to_string(),
            expected: "operator or end of input",
            offset: tok.offset,
        }),
    }
}

type Parsed = Result<(Expr, Span), ParseError>;

fn join(op: BinaryOp, offset: usize, (l, ls): (Expr, Span), (r, rs): (Expr, Span)) -> (Expr, Span) {
    (Expr::binary(op, l, r), Span::node(offset, vec![ls, rs]))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn advance(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn sum(&mut self) -> Parsed {
        let mut lhs = self.neg()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinaryOp::Add,
                Some(TokenKind::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            let offset = self.advance().expect("peeked").offset;
            let rhs = self.neg()?;
            lhs = join(op, offset, lhs, rhs);
        }
    }

    fn neg(&mut self) -> Parsed {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            let offset = self.advance().expect("peeked").offset;
            let (inner, span) = self.neg()?;
            return Ok((Expr::Negate(Box::new(inner)), Span::node(offset, vec![span])));
        }
        self.scaled()
    }

    fn scaled(&mut self) -> Parsed {
        let mut lhs = self.product()?;
        while self.peek_kind() == Some(&TokenKind::Star) {
            let offset = self.advance().expect("peeked").offset;
            let rhs = self.product()?;
            lhs = join(BinaryOp::ScalarMul, offset, lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Parsed {
        let mut lhs = self.postfix()?;
        let mut first: Option<(BinaryOp, usize)> = None;
        while let Some(tok) = self.peek() {
            let Some(op) = BinaryOp::product(&tok.kind) else {
                break;
            };
            match first {
                None => first = Some((op, tok.offset)),
                Some((first_op, first_offset)) if first_op != op => {
                    return Err(ParseError::MixedOperators {
                        first: first_op.symbol(),
                        first_offset,
                        second: op.symbol(),
                        offset: tok.offset,
                    })
                }
                Some(_) => {}
            }
            self.advance();
            let rhs = self.postfix()?;
            lhs = join(op, tok.offset, lhs, rhs);
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Parsed {
        let (mut expr, mut span) = self.primary()?;
        while self.peek_kind() == Some(&TokenKind::Dagger) {
            let offset = self.advance().expect("peeked").offset;
            expr = Expr::Transpose(Box::new(expr));
            span = Span::node(offset, vec![span]);
        }
        Ok((expr, span))
    }

    fn primary(&mut self) -> Parsed {
        const EXPECTED: &str = "operand";
        let Some(tok) = self.advance() else {
            return Err(ParseError::UnexpectedEnd {
                expected: EXPECTED,
                offset: self.end_offset,
            });
        };
        let leaf = |expr| Ok((expr, Span::leaf(tok.offset)));
        match &tok.kind {
            TokenKind::Nabla => {
                if self.peek_kind() == Some(&TokenKind::LParen) {
                    let open = self.advance().expect("peeked").offset;
                    let (inner, span) = self.group_body(open)?;
                    Ok((Expr::Grad(Box::new(inner)), Span::node(tok.offset, vec![span])))
                } else {
                    leaf(Expr::Nabla)
                }
            }
            TokenKind::Ident(name) => leaf(Expr::Var(name.clone())),
            TokenKind::Number(x) => leaf(Expr::Scalar(*x)),
            TokenKind::LParen => self.group_body(tok.offset),
            TokenKind::RParen => Err(ParseError::UnmatchedParen { offset: tok.offset }),
            other => Err(ParseError::Unexpected {
                found: other.to_string(),
                expected: EXPECTED,
                offset: tok.offset,
            }),
        }
    }

    fn group_body(&mut self, open: usize) -> Parsed {
        let inner = self.sum().map_err(|e| match e {
            ParseError::UnexpectedEnd { .. } if self.pos > self.tokens.len() => {
                ParseError::UnclosedParen { offset: open }
            }
            e => e,
        })?;
        match self.advance() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => Ok(inner),
            Some(tok) => Err(ParseError::Unexpected {
                found: tok.kind.to_string(),
                expected: "')'",
                offset: tok.offset,
            }),
            None => Err(ParseError::UnclosedParen { offset: open }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyad_grad_v() -> Expr {
        Expr::binary(BinaryOp::Dyad, Expr::Nabla, Expr::var("v"))
    }

    #[test]
    fn parenthesized_postfactor() {
        assert_eq!(
            parse_str("dr · (∇⊗v)").unwrap(),
            Expr::binary(BinaryOp::Dot, Expr::var("dr"), dyad_grad_v())
        );
    }

    #[test]
    fn transposed_prefactor() {
        assert_eq!(
            parse_str("(∇⊗v)† · dr").unwrap(),
            Expr::binary(
                BinaryOp::Dot,
                Expr::Transpose(Box::new(dyad_grad_v())),
                Expr::var("dr")
            )
        );
        assert_eq!(parse_str("(∇⊗v)† · dr"), parse_str("(grad (x) v)' . dr"));
    }

    #[test]
    fn mixed_products_rejected() {
        match parse_str("dr · ∇⊗v") {
            Err(ParseError::MixedOperators {
                first,
                first_offset,
                second,
                offset,
            }) => {
                assert_eq!((first, second), ("·", "⊗"));
                assert_eq!(first_offset, 3);
                assert_eq!(offset, 9);
            }
            other => panic!("expected mixed-operator error, got {other:?}"),
        }
        let msg = parse_str("a ^ b . c").unwrap_err().to_string();
        assert!(msg.contains('∧') && msg.contains('·'), "{msg}");
    }

    #[test]
    fn same_product_is_left_associative() {
        assert_eq!(
            parse_str("a · b · c").unwrap(),
            Expr::binary(
                BinaryOp::Dot,
                Expr::binary(BinaryOp::Dot, Expr::var("a"), Expr::var("b")),
                Expr::var("c")
            )
        );
    }

    #[test]
    fn precedence_tiers() {
        // a + -b · c * 2  ==  a + (-((b · c) * 2))
        assert_eq!(
            parse_str("a + -b · c * 2").unwrap(),
            Expr::binary(
                BinaryOp::Add,
                Expr::var("a"),
                Expr::Negate(Box::new(Expr::binary(
                    BinaryOp::ScalarMul,
                    Expr::binary(BinaryOp::Dot, Expr::var("b"), Expr::var("c")),
                    Expr::Scalar(2.0)
                )))
            )
        );
        assert_eq!(
            parse_str("v ⊗ w†").unwrap(),
            Expr::binary(
                BinaryOp::Dyad,
                Expr::var("v"),
                Expr::Transpose(Box::new(Expr::var("w")))
            )
        );
    }

    #[test]
    fn gradient_of_scalar() {
        assert_eq!(
            parse_str("∇(dr · v)").unwrap(),
            Expr::Grad(Box::new(Expr::binary(BinaryOp::Dot, Expr::var("dr"), Expr::var("v"))))
        );
    }

    #[test]
    fn paren_errors() {
        assert_eq!(parse_str("(dr · v"), Err(ParseError::UnclosedParen { offset: 0 }));
        assert_eq!(parse_str("dr · v)"), Err(ParseError::UnmatchedParen { offset: 7 }));
        assert_eq!(parse_str("((v)"), Err(ParseError::UnclosedParen { offset: 0 }));
        assert!(matches!(parse_str(""), Err(ParseError::UnexpectedEnd { offset: 0, .. })));
        assert!(matches!(parse_str("v +"), Err(ParseError::UnexpectedEnd { offset: 3, .. })));
        assert!(matches!(parse_str("v w"), Err(ParseError::Unexpected { offset: 2, .. })));
        assert!(matches!(parse_str("@"), Err(ParseError::Lex(_))));
    }

    #[test]
    fn render_reparses() {
        for src in [
            "dr · (∇⊗v)",
            "(∇⊗v)† · dr",
            "dr·(d)",
            "dr·(Ω)",
            "0.5 * (∇ ∧ v) - -dr",
            "∇(dr · v) + (dr · (∇⊗v))'",
            "∇( x ) · ∇(y)",
        ] {
            let e = parse_str(src).unwrap();
            assert_eq!(parse_str(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }

    #[test]
    fn spans_point_at_defining_tokens() {
        let (_, span) = parse_spanned("dr · (∇⊗w)†").unwrap();
        assert_eq!(span.offset, 3);
        assert_eq!(span.locate(&[0]), 0);
        assert_eq!(span.locate(&[1]), 15);
        assert_eq!(span.locate(&[1, 0]), 10);
        assert_eq!(span.locate(&[1, 0, 1]), 13);
        assert_eq!(span.locate(&[1, 0, 1, 4]), 13);
        let (_, span) = parse_spanned("-∇(a)").unwrap();
        assert_eq!(span.locate(&[0]), 1);
    }
}
