//! Gibbsian tensor notation: lexer, parser, evaluator and convention audit.

mod audit;
mod eval;
mod lexer;
mod parser;

pub use audit::{audit_convention, AuditResult, Verdict, AUDIT_TOLERANCE};
pub use eval::{EvalContext, EvalError, Kind, TracedError, Value, FIELD_NAME, ROTATION_NAMES, STRAIN_NAME};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, parse_spanned, parse_str, BinaryOp, Expr, ParseError, Span};
