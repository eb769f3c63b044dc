//! Scalar expression trees over a declared set of variables.
//!
//! The grammar supports `+ - * / ^` (with `^` right-associative and binding
//! tighter than unary minus), unary minus, parentheses, decimal literals, and
//! the unary functions `sin cos exp log sqrt`. There is no implicit
//! multiplication: `2u` is a syntax error.
//!
//! Expressions evaluate along two independent paths: on jets (derivative
//! propagation, used to build immersions) and on plain floats (used by
//! finite-difference oracles and field evaluation). Both paths lower `a^k`
//! with an integral constant exponent to repeated multiplication, so
//! polynomials stay exact; everything else goes through exp/log.

mod parser;

use crate::error::{Error, Result};
use crate::jet::{Jet, JetError};

/// Binary operators in source order of appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// The unary functions the grammar knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

/// One node of an expression tree. `offset` is the byte position of the
/// node's leading token in the source, kept for error annotation; it is
/// ignored by structural equality.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Const(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl PartialEq for Expr {
    /// Structural equality: spans are ignored, so a reparse of the printed
    /// form compares equal to the original tree.
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Const(a), ExprKind::Const(b)) => a == b,
            (ExprKind::Var(a), ExprKind::Var(b)) => a == b,
            (ExprKind::Neg(a), ExprKind::Neg(b)) => a == b,
            (ExprKind::Bin(o1, a1, b1), ExprKind::Bin(o2, a2, b2)) => {
                o1 == o2 && a1 == a2 && b1 == b2
            }
            (ExprKind::Call(f1, a1), ExprKind::Call(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

/// Parse `source` into an expression tree. Every identifier that is not a
/// function name must appear in `variables`, otherwise the parse fails with
/// the identifier and its byte offset.
pub fn parse_expression(source: &str, variables: &[&str]) -> Result<Expr> {
    parser::parse(source, variables)
}

/// If the exponent of a power node is a constant with an exactly integral
/// value in i32 range, return it. Handles an explicit leading minus.
fn integral_exponent(e: &Expr) -> Option<i32> {
    match &e.kind {
        ExprKind::Const(c) => {
            if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
                Some(*c as i32)
            } else {
                None
            }
        }
        ExprKind::Neg(inner) => integral_exponent(inner).map(|k| -k),
        _ => None,
    }
}

fn domain_err(e: JetError, offset: usize) -> Error {
    Error::EvalDomain { source: e, u: f64::NAN, v: f64::NAN, offset: Some(offset) }
}

/// Evaluate on jets. `bindings` maps each declared variable name to its jet.
pub fn evaluate_on_jets(expr: &Expr, bindings: &[(&str, Jet)]) -> Result<Jet> {
    let wrap = |r: std::result::Result<Jet, JetError>, off: usize| r.map_err(|e| domain_err(e, off));
    match &expr.kind {
        ExprKind::Const(c) => Ok(Jet::constant(*c)),
        ExprKind::Var(name) => bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, j)| *j)
            .ok_or_else(|| Error::UnknownIdentifier { name: name.clone(), offset: expr.offset }),
        ExprKind::Neg(inner) => Ok(-evaluate_on_jets(inner, bindings)?),
        ExprKind::Bin(op, lhs, rhs) => {
            let a = evaluate_on_jets(lhs, bindings)?;
            match op {
                BinOp::Add => Ok(a + evaluate_on_jets(rhs, bindings)?),
                BinOp::Sub => Ok(a - evaluate_on_jets(rhs, bindings)?),
                BinOp::Mul => Ok(a * evaluate_on_jets(rhs, bindings)?),
                BinOp::Div => {
                    let b = evaluate_on_jets(rhs, bindings)?;
                    wrap(a.div(&b), expr.offset)
                }
                BinOp::Pow => {
                    if let Some(k) = integral_exponent(rhs) {
                        return wrap(a.powi(k), expr.offset);
                    }
                    let b = evaluate_on_jets(rhs, bindings)?;
                    let db = b.coeffs();
                    if db[1..].iter().all(|&c| c == 0.0) {
                        wrap(a.powf(db[0]), expr.offset)
                    } else {
                        // Fully variable exponent: a^b = exp(b·log a).
                        let la = wrap(a.ln(), expr.offset)?;
                        Ok((b * la).exp())
                    }
                }
            }
        }
        ExprKind::Call(f, arg) => {
            let a = evaluate_on_jets(arg, bindings)?;
            match f {
                Func::Sin => Ok(a.sin()),
                Func::Cos => Ok(a.cos()),
                Func::Exp => Ok(a.exp()),
                Func::Log => wrap(a.ln(), expr.offset),
                Func::Sqrt => wrap(a.sqrt(), expr.offset),
            }
        }
    }
}

/// Evaluate on plain floats, mirroring the jet path's domain checks and its
/// integral-power lowering so the two paths agree to rounding.
pub fn evaluate_values(expr: &Expr, bindings: &[(&str, f64)]) -> Result<f64> {
    let dom = |func: &'static str, value: f64, off: usize| {
        Error::EvalDomain { source: JetError::Domain { func, value }, u: f64::NAN, v: f64::NAN, offset: Some(off) }
    };
    match &expr.kind {
        ExprKind::Const(c) => Ok(*c),
        ExprKind::Var(name) => bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, x)| *x)
            .ok_or_else(|| Error::UnknownIdentifier { name: name.clone(), offset: expr.offset }),
        ExprKind::Neg(inner) => Ok(-evaluate_values(inner, bindings)?),
        ExprKind::Bin(op, lhs, rhs) => {
            let a = evaluate_values(lhs, bindings)?;
            match op {
                BinOp::Add => Ok(a + evaluate_values(rhs, bindings)?),
                BinOp::Sub => Ok(a - evaluate_values(rhs, bindings)?),
                BinOp::Mul => Ok(a * evaluate_values(rhs, bindings)?),
                BinOp::Div => {
                    let b = evaluate_values(rhs, bindings)?;
                    if b == 0.0 {
                        return Err(Error::EvalDomain {
                            source: JetError::DivisionByZero,
                            u: f64::NAN,
                            v: f64::NAN,
                            offset: Some(expr.offset),
                        });
                    }
                    Ok(a / b)
                }
                BinOp::Pow => {
                    if let Some(k) = integral_exponent(rhs) {
                        if a == 0.0 && k < 0 {
                            return Err(dom("pow", a, expr.offset));
                        }
                        return Ok(a.powi(k));
                    }
                    let b = evaluate_values(rhs, bindings)?;
                    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
                        if a == 0.0 && b < 0.0 {
                            return Err(dom("pow", a, expr.offset));
                        }
                        return Ok(a.powi(b as i32));
                    }
                    if a <= 0.0 {
                        return Err(dom("pow", a, expr.offset));
                    }
                    Ok((b * a.ln()).exp())
                }
            }
        }
        ExprKind::Call(f, arg) => {
            let a = evaluate_values(arg, bindings)?;
            match f {
                Func::Sin => Ok(a.sin()),
                Func::Cos => Ok(a.cos()),
                Func::Exp => Ok(a.exp()),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(dom("log", a, expr.offset));
                    }
                    Ok(a.ln())
                }
                Func::Sqrt => {
                    // Mirror the jet path, which rejects 0 as well because
                    // the derivative coefficients blow up there.
                    if a <= 0.0 {
                        return Err(dom("sqrt", a, expr.offset));
                    }
                    Ok(a.sqrt())
                }
            }
        }
    }
}

/// Operator precedence for printing: higher binds tighter.
fn prec(kind: &ExprKind) -> u8 {
    match kind {
        ExprKind::Bin(BinOp::Add | BinOp::Sub, _, _) => 1,
        ExprKind::Bin(BinOp::Mul | BinOp::Div, _, _) => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Bin(BinOp::Pow, _, _) => 4,
        ExprKind::Const(_) | ExprKind::Var(_) | ExprKind::Call(_, _) => 5,
    }
}

/// Render with the minimal parentheses that make the output reparse to a
/// structurally identical tree. Constants print in shortest round-trip form.
pub fn pretty(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(expr, &mut out);
    out
}

fn write_expr(expr: &Expr, out: &mut String) {
    match &expr.kind {
        ExprKind::Const(c) => {
            out.push_str(&format!("{c}"));
        }
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Neg(inner) => {
            out.push('-');
            write_child(inner, prec(&expr.kind), out);
        }
        ExprKind::Bin(op, lhs, rhs) => {
            let p = prec(&expr.kind);
            let (sym, left_min, right_min) = match op {
                // Left-assoc: right child needs parens at equal precedence.
                BinOp::Add => ("+", p, p + 1),
                BinOp::Sub => ("-", p, p + 1),
                BinOp::Mul => ("*", p, p + 1),
                BinOp::Div => ("/", p, p + 1),
                // Right-assoc: left child needs parens at equal precedence.
                BinOp::Pow => ("^", p + 1, p),
            };
            write_child(lhs, left_min, out);
            out.push_str(sym);
            write_child(rhs, right_min, out);
        }
        ExprKind::Call(f, arg) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(arg, out);
            out.push(')');
        }
    }
}

fn write_child(child: &Expr, min_prec: u8, out: &mut String) {
    if prec(&child.kind) < min_prec {
        out.push('(');
        write_expr(child, out);
        out.push(')');
    } else {
        write_expr(child, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Var;

    fn p(src: &str) -> Expr {
        parse_expression(src, &["u", "v", "x", "y"]).unwrap()
    }

    #[test]
    fn parses_difference_of_squares() {
        let e = p("u^2 - v^2");
        match &e.kind {
            ExprKind::Bin(BinOp::Sub, l, r) => {
                assert!(matches!(l.kind, ExprKind::Bin(BinOp::Pow, _, _)));
                assert!(matches!(r.kind, ExprKind::Bin(BinOp::Pow, _, _)));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn multiplication_associates_left() {
        let e = p("2*u*v");
        match &e.kind {
            ExprKind::Bin(BinOp::Mul, l, r) => {
                assert!(matches!(l.kind, ExprKind::Bin(BinOp::Mul, _, _)));
                assert!(matches!(r.kind, ExprKind::Var(ref n) if n == "v"));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn power_associates_right() {
        let e = p("u^2^3");
        match &e.kind {
            ExprKind::Bin(BinOp::Pow, l, r) => {
                assert!(matches!(l.kind, ExprKind::Var(_)));
                assert!(matches!(r.kind, ExprKind::Bin(BinOp::Pow, _, _)));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        // -u^2 must parse as -(u^2).
        let e = p("-u^2");
        match &e.kind {
            ExprKind::Neg(inner) => {
                assert!(matches!(inner.kind, ExprKind::Bin(BinOp::Pow, _, _)))
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_rejected_with_offset() {
        let err = parse_expression("sin(w) + u", &["u", "v"]).unwrap_err();
        match err {
            Error::UnknownIdentifier { name, offset } => {
                assert_eq!(name, "w");
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn implicit_multiplication_is_a_syntax_error() {
        let err = parse_expression("2u", &["u"]).unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 1, .. }), "{err:?}");
    }

    #[test]
    fn unbalanced_parens_error() {
        assert!(parse_expression("sin(u", &["u"]).is_err());
        assert!(parse_expression("(u))", &["u"]).is_err());
        assert!(parse_expression("", &["u"]).is_err());
    }

    #[test]
    fn roundtrip_examples() {
        for src in [
            "u^2-v^2",
            "2*u*v",
            "sin(u)*cos(v)",
            "-u^2",
            "(-u)^2",
            "u-(v-1)",
            "u/(v*2)",
            "u^v^2",
            "(u^v)^2",
            "-(u*v)",
            "exp(u*v)+log(2+u)",
            "sqrt(1+u^2)",
            "1/(1+u^2+v^2)^2",
        ] {
            let ast = p(src);
            let printed = pretty(&ast);
            let reparsed = p(&printed);
            assert_eq!(ast, reparsed, "{src} -> {printed}");
        }
    }

    #[test]
    fn jet_and_value_paths_agree() {
        let e = p("exp(u*v) + sin(u)^2 / (2 + cos(v))");
        let (u, v) = (0.37, -0.81);
        let j = evaluate_on_jets(
            &e,
            &[("u", Jet::variable(Var::U, u)), ("v", Jet::variable(Var::V, v))],
        )
        .unwrap();
        let x = evaluate_values(&e, &[("u", u), ("v", v)]).unwrap();
        assert!((j.value() - x).abs() <= 1e-14 * x.abs().max(1.0));
    }

    #[test]
    fn integral_power_of_negative_base_works() {
        let e = p("u^3");
        let j = evaluate_on_jets(&e, &[("u", Jet::variable(Var::U, -2.0))]).unwrap();
        assert_eq!(j.value(), -8.0);
        assert_eq!(j.d(0), 12.0);
        // Fractional power of a negative base is a domain error.
        let frac = p("u^0.5");
        assert!(evaluate_on_jets(&frac, &[("u", Jet::variable(Var::U, -2.0))]).is_err());
    }

    #[test]
    fn division_by_zero_reports_offset() {
        let e = p("1/(u-u)");
        let err = evaluate_on_jets(&e, &[("u", Jet::variable(Var::U, 1.0))]).unwrap_err();
        match err {
            Error::EvalDomain { offset: Some(o), .. } => assert_eq!(o, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn variable_exponent_falls_back_to_exp_log() {
        let e = p("u^v");
        let (u, v) = (1.7, 0.6);
        let j = evaluate_on_jets(
            &e,
            &[("u", Jet::variable(Var::U, u)), ("v", Jet::variable(Var::V, v))],
        )
        .unwrap();
        let want = u.powf(v);
        assert!((j.value() - want).abs() < 1e-14);
        // ∂u(u^v) = v·u^(v−1).
        assert!((j.d(0) - v * u.powf(v - 1.0)).abs() < 1e-13);
        // ∂v(u^v) = u^v · ln u.
        assert!((j.d(1) - want * u.ln()).abs() < 1e-13);
    }
}
