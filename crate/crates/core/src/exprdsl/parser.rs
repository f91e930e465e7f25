use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BinOp, ExprAst};

/// Parse failure with the byte offset of the offending token (or the input
/// length at end of input) and the tokens that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("parse error at offset {offset}: {message}; expected one of {}", .expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<String>,
}

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
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
        }
    }
}

const BASE_START: &[&str] = &["NUMBER", "k", "e", "(", "exp", "ln"];

fn expected(set: &[&str]) -> Vec<String> {
    set.iter().map(|s| s.to_string()).collect()
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let frac = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == frac {
                        return Err(ParseError {
                            offset: i,
                            message: "missing digits after decimal point".into(),
                            expected: expected(&["digit"]),
                        });
                    }
                }
                // exponent only when digits follow, so "2e" lexes as 2 then e
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    message: format!("malformed number '{text}'"),
                    expected: expected(&["NUMBER"]),
                })?;
                if !v.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        message: format!("number '{text}' is out of range"),
                        expected: expected(&["NUMBER"]),
                    });
                }
                out.push((start, Tok::Num(v)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                // report the full (possibly multi-byte) character
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                    expected: expected(&[
                        "+", "-", "*", "/", "^", "(", ")", "NUMBER", "k", "e", "exp", "ln",
                    ]),
                });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, set: &[&str]) -> ParseError {
        let message = match self.peek() {
            Some(t) => format!("unexpected {t}"),
            None => "unexpected end of input".to_string(),
        };
        ParseError {
            offset: self.offset(),
            message,
            expected: expected(set),
        }
    }

    fn expect(&mut self, want: Tok, name: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(ExprAst::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ExprAst, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error(BASE_START)),
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(ExprAst::Const(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "k" => {
                    self.pos += 1;
                    Ok(ExprAst::K)
                }
                "e" => {
                    self.pos += 1;
                    Ok(ExprAst::E)
                }
                "exp" | "ln" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "(")?;
                    let inner = self.expr()?;
                    self.close_paren()?;
                    Ok(if name == "exp" {
                        ExprAst::exp(inner)
                    } else {
                        ExprAst::ln(inner)
                    })
                }
                _ => Err(self.error(BASE_START)),
            },
            _ => Err(self.error(BASE_START)),
        }
    }

    fn close_paren(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[")", "+", "-", "*", "/", "^"]))
        }
    }
}

/// Parses a sequence definition.
pub fn parse(src: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    if p.toks.is_empty() {
        return Err(p.error(BASE_START));
    }
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error(&["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> ExprAst {
        ExprAst::K
    }

    fn c(v: f64) -> ExprAst {
        ExprAst::Const(v)
    }

    #[test]
    fn exp_of_square() {
        assert_eq!(
            parse("exp(k^2)").unwrap(),
            ExprAst::exp(ExprAst::binary(BinOp::Pow, k(), c(2.0)))
        );
    }

    #[test]
    fn exp_of_reciprocal_square() {
        assert_eq!(
            parse("exp(1/(k*k))").unwrap(),
            ExprAst::exp(ExprAst::binary(
                BinOp::Div,
                c(1.0),
                ExprAst::binary(BinOp::Mul, k(), k())
            ))
        );
    }

    #[test]
    fn truncated_input_reports_end_offset() {
        let err = parse("exp(k^").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains(&"NUMBER".to_string()));
        assert!(err.expected.contains(&"k".to_string()));
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(
            parse("k^2^3").unwrap(),
            ExprAst::binary(BinOp::Pow, k(), ExprAst::binary(BinOp::Pow, c(2.0), c(3.0)))
        );
    }

    #[test]
    fn subtraction_is_left_associative() {
        assert_eq!(
            parse("k-1-2").unwrap(),
            ExprAst::binary(BinOp::Sub, ExprAst::binary(BinOp::Sub, k(), c(1.0)), c(2.0))
        );
    }

    #[test]
    fn precedence_and_whitespace() {
        assert_eq!(
            parse(" 1 + k * 2 ^ 3 ").unwrap(),
            ExprAst::binary(
                BinOp::Add,
                c(1.0),
                ExprAst::binary(BinOp::Mul, k(), ExprAst::binary(BinOp::Pow, c(2.0), c(3.0)))
            )
        );
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse("2.5").unwrap(), c(2.5));
        assert_eq!(parse("1e-3").unwrap(), c(1e-3));
        assert_eq!(parse("1.5E+2").unwrap(), c(150.0));
        assert_eq!(parse("1.").unwrap_err().offset, 2);
        assert!(parse("2e").is_err());
        assert!(parse("1e999").is_err());
    }

    #[test]
    fn rejects_unknown_input() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("   ").unwrap_err().offset, 3);
        assert_eq!(parse("-k").unwrap_err().offset, 0);
        assert_eq!(parse("sin(k)").unwrap_err().offset, 0);
        assert_eq!(parse("k k").unwrap_err().offset, 2);
        assert_eq!(parse("exp k").unwrap_err().offset, 4);
        assert_eq!(parse("(k").unwrap_err().offset, 2);
        assert_eq!(parse("k)").unwrap_err().offset, 1);
        assert_eq!(parse("k # 2").unwrap_err().offset, 2);
    }
}
