//! Closed-form sequence definitions in the free variable `k`.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := base ("^" factor)?
//! base   := NUMBER | "k" | "e" | "(" expr ")" | "exp" "(" expr ")" | "ln" "(" expr ")"
//! ```
//!
//! `^` is right-associative, whitespace is ignored and there is no unary minus.

mod eval;
mod parser;

use std::fmt;

pub use eval::{eval_at, eval_log_dd, eval_value_dd};
pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Const(f64),
    K,
    E,
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Exp(Box<ExprAst>),
    Ln(Box<ExprAst>),
}

impl ExprAst {
    pub fn binary(op: BinOp, lhs: ExprAst, rhs: ExprAst) -> Self {
        ExprAst::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn exp(inner: ExprAst) -> Self {
        ExprAst::Exp(Box::new(inner))
    }

    pub fn ln(inner: ExprAst) -> Self {
        ExprAst::Ln(Box::new(inner))
    }

    fn precedence(&self) -> u8 {
        match self {
            ExprAst::Binary(op, ..) => op.precedence(),
            _ => 4,
        }
    }

    fn fmt_child(child: &ExprAst, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if parens {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Const(c) => write!(f, "{c}"),
            ExprAst::K => f.write_str("k"),
            ExprAst::E => f.write_str("e"),
            ExprAst::Exp(inner) => write!(f, "exp({inner})"),
            ExprAst::Ln(inner) => write!(f, "ln({inner})"),
            ExprAst::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                let (lp, rp) = if *op == BinOp::Pow {
                    // right-associative: only the base needs guarding at equal precedence
                    (lhs.precedence() <= p, rhs.precedence() < p)
                } else {
                    (lhs.precedence() < p, rhs.precedence() <= p)
                };
                Self::fmt_child(lhs, lp, f)?;
                write!(f, "{}", op.symbol())?;
                Self::fmt_child(rhs, rp, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_minimises_parentheses() {
        let cases = [
            ("exp(k^2)", "exp(k^2)"),
            ("exp(1/(k*k))", "exp(1/(k*k))"),
            ("(k^2)^3", "(k^2)^3"),
            ("k^2^3", "k^2^3"),
            ("(1-k)-(2-k)", "1-k-(2-k)"),
            ("2^(0-k)", "2^(0-k)"),
            ("( k + 1 ) * e", "(k+1)*e"),
        ];
        for (src, want) in cases {
            assert_eq!(parse(src).unwrap().to_string(), want, "{src}");
        }
    }
}
