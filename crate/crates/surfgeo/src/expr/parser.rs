//! Lexer and Pratt parser for the expression grammar.
//!
//! Tokens carry their byte offsets so syntax errors, unknown identifiers, and
//! later evaluation errors can point back into the source string.

use super::{BinOp, Expr, ExprKind, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number `{x}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(syntax(i.min(bytes.len()), "expected digit after decimal point"));
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Only consume as an exponent when a valid exponent
                    // follows; otherwise leave it for the identifier lexer
                    // (which will then fail as implicit multiplication).
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
                toks.push((Tok::Num(value), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    variables: &'a [&'a str],
}

/// Binding power of unary minus: looser than `^` (so `-u^2` negates the
/// square) but tighter than `*` and `/`.
const NEG_BP: u8 = 5;

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self, open_offset: usize) -> Result<()> {
        match self.advance() {
            (Tok::RParen, _) => Ok(()),
            (tok, off) => Err(syntax(
                off,
                format!(
                    "expected `)` to close the group opened at byte {open_offset}, found {}",
                    tok.describe()
                ),
            )),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, off) = self.advance();
        match tok {
            Tok::Num(x) => Ok(Expr { kind: ExprKind::Const(x), offset: off }),
            Tok::Ident(name) => {
                if matches!(self.peek().0, Tok::LParen) {
                    let func = Func::from_name(&name).ok_or_else(|| {
                        Error::UnknownIdentifier { name: name.clone(), offset: off }
                    })?;
                    let (_, open_off) = self.advance();
                    let arg = self.expr_bp(0)?;
                    self.expect_rparen(open_off)?;
                    Ok(Expr { kind: ExprKind::Call(func, Box::new(arg)), offset: off })
                } else {
                    if !self.variables.contains(&name.as_str()) {
                        return Err(Error::UnknownIdentifier { name, offset: off });
                    }
                    Ok(Expr { kind: ExprKind::Var(name), offset: off })
                }
            }
            Tok::LParen => {
                let inner = self.expr_bp(0)?;
                self.expect_rparen(off)?;
                Ok(inner)
            }
            Tok::Minus => {
                let operand = self.expr_bp(NEG_BP)?;
                Ok(Expr { kind: ExprKind::Neg(Box::new(operand)), offset: off })
            }
            other => Err(syntax(off, format!("expected expression, found {}", other.describe()))),
        }
    }

    /// Infix binding powers: (left, right). Right-associative `^` has
    /// left > right; the left-associative operators have left < right.
    fn infix_bp(tok: &Tok) -> Option<(u8, u8, BinOp)> {
        match tok {
            Tok::Plus => Some((1, 2, BinOp::Add)),
            Tok::Minus => Some((1, 2, BinOp::Sub)),
            Tok::Star => Some((3, 4, BinOp::Mul)),
            Tok::Slash => Some((3, 4, BinOp::Div)),
            Tok::Caret => Some((7, 6, BinOp::Pow)),
            _ => None,
        }
    }

    fn expr_bp(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.primary()?;
        loop {
            let (tok, off) = self.peek().clone();
            let Some((lbp, rbp, op)) = Self::infix_bp(&tok) else { break };
            if lbp < min_bp {
                break;
            }
            self.advance();
            let rhs = self.expr_bp(rbp)?;
            // Annotate the node with the operator position: evaluation
            // errors (division by zero, bad power) point at the operator.
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), offset: off };
        }
        Ok(lhs)
    }
}

pub fn parse(source: &str, variables: &[&str]) -> Result<Expr> {
    let toks = lex(source)?;
    let mut parser = Parser { toks, pos: 0, variables };
    let expr = parser.expr_bp(0)?;
    match parser.advance() {
        (Tok::End, _) => Ok(expr),
        (tok, off) => Err(syntax(
            off,
            format!("expected operator or end of input, found {}", tok.describe()),
        )),
    }
}
