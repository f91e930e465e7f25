use super::{BinOp, ExprAst};
use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::numerics::Dd;

/// Exponents up to this magnitude go through exact repeated squaring.
const MAX_INTEGER_EXPONENT: f64 = 1e6;

fn finite(v: Dd, what: &str) -> Result<Dd> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} is not finite")))
    }
}

/// Real value of `ast` at `k`, in double-double.
pub fn eval_value_dd(ast: &ExprAst, k: u64) -> Result<Dd> {
    match ast {
        ExprAst::Const(c) => Ok(Dd::from(*c)),
        ExprAst::K => Ok(Dd::from(k as f64)),
        ExprAst::E => Ok(Dd::E),
        ExprAst::Exp(inner) => {
            let u = eval_value_dd(inner, k)?;
            finite(Dd::from(u.to_f64().exp()), "exp")
        }
        ExprAst::Ln(inner) => {
            let v = eval_value_dd(inner, k)?;
            if v.hi().is_nan() || v.hi() <= 0.0 {
                return Err(Error::Domain(format!(
                    "ln of non-positive value {}",
                    v.to_f64()
                )));
            }
            Ok(v.ln())
        }
        ExprAst::Binary(op, lhs, rhs) => {
            let a = eval_value_dd(lhs, k)?;
            let b = eval_value_dd(rhs, k)?;
            let v = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.hi() == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    a / b
                }
                BinOp::Pow => pow(a, b)?,
            };
            finite(v, "intermediate value")
        }
    }
}

fn pow(base: Dd, exponent: Dd) -> Result<Dd> {
    if exponent.is_integer() && exponent.hi().abs() <= MAX_INTEGER_EXPONENT {
        let n = exponent.hi() as i64;
        if base.hi() == 0.0 && n < 0 {
            return Err(Error::Domain("zero raised to a negative power".into()));
        }
        return Ok(base.powi(n));
    }
    if base.hi() < 0.0 {
        return Err(Error::Domain(format!(
            "negative base {} with non-integer exponent",
            base.to_f64()
        )));
    }
    Ok(Dd::from(base.to_f64().powf(exponent.to_f64())))
}

/// Natural log of the value of `ast` at `k`, computed without forming the value
/// where the tree allows it: `exp(f)` yields `f`, `b^p` yields `p * log b`, and
/// products and quotients of positive factors add or subtract logs.
pub fn eval_log_dd(ast: &ExprAst, k: u64) -> Result<Dd> {
    match ast {
        ExprAst::Exp(inner) => eval_value_dd(inner, k),
        ExprAst::E => Ok(Dd::ONE),
        ExprAst::K => Ok(Dd::from(k as f64).ln()),
        ExprAst::Binary(BinOp::Pow, base, exponent) => match eval_log_dd(base, k) {
            Ok(lb) => {
                let p = eval_value_dd(exponent, k)?;
                finite(p * lb, "log of power")
            }
            Err(Error::NonPositiveValue(_)) => log_of_value(ast, k),
            Err(e) => Err(e),
        },
        ExprAst::Binary(op @ (BinOp::Mul | BinOp::Div), lhs, rhs) => {
            match (eval_log_dd(lhs, k), eval_log_dd(rhs, k)) {
                (Ok(a), Ok(b)) => Ok(if *op == BinOp::Mul { a + b } else { a - b }),
                (Err(Error::NonPositiveValue(_)), _) | (_, Err(Error::NonPositiveValue(_))) => {
                    log_of_value(ast, k)
                }
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
        _ => log_of_value(ast, k),
    }
}

fn log_of_value(ast: &ExprAst, k: u64) -> Result<Dd> {
    let v = eval_value_dd(ast, k)?;
    if v.hi() > 0.0 {
        Ok(v.ln())
    } else {
        Err(Error::NonPositiveValue(v.to_f64()))
    }
}

/// Evaluates `ast` at `k >= 1` as a geometric number.
pub fn eval_at(ast: &ExprAst, k: u64) -> Result<GNum> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    GNum::from_log(eval_log_dd(ast, k)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprdsl::parse;

    fn log_at(src: &str, k: u64) -> Result<f64> {
        eval_at(&parse(src).unwrap(), k).map(GNum::log_value)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(log_at("exp(k^2)", 3).unwrap(), 9.0);
        assert_eq!(log_at("e", 7).unwrap(), 1.0);
        assert!(matches!(log_at("1 - 2", 1), Err(Error::NonPositiveValue(v)) if v == -1.0));
    }

    #[test]
    fn top_level_exp_never_materialises_the_value() {
        // e^{10^12} overflows any float; its log does not
        assert_eq!(log_at("exp(k^4)", 1000).unwrap(), 1e12);
        assert_eq!(log_at("e^(k^3)", 200).unwrap(), 8e6);
        // products of large exponentials stay in the log domain
        assert_eq!(log_at("exp(k)*exp(k^2)", 1000).unwrap(), 1000.0 + 1e6);
    }

    #[test]
    fn inner_exp_overflow_is_an_error() {
        assert!(matches!(
            log_at("exp(exp(k))", 1000),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn ln_of_nonpositive_is_a_domain_error() {
        assert!(matches!(log_at("exp(ln(k-1))", 1), Err(Error::Domain(_))));
        assert!(matches!(log_at("ln(0)", 3), Err(Error::Domain(_))));
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        assert!(matches!(log_at("exp(1/(k-2))", 2), Err(Error::Domain(_))));
    }

    #[test]
    fn negative_integer_powers() {
        let v = log_at("exp(2^(0-k))", 4).unwrap();
        assert_eq!(v, 0.0625);
        assert_eq!(log_at("exp(2^(0-k))", 2000).unwrap(), 0.0);
    }

    #[test]
    fn non_integer_powers() {
        let v = log_at("exp(k^0.5)", 16).unwrap();
        assert_eq!(v, 4.0);
        assert!(matches!(log_at("(0-2)^0.5", 1), Err(Error::Domain(_))));
        // negative base with integer exponent is fine
        assert!((log_at("(0-2)^2", 1).unwrap() - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_of_plain_values() {
        assert!((log_at("k", 10).unwrap() - 10f64.ln()).abs() < 1e-15);
        assert!((log_at("exp(ln(k))", 10).unwrap() - 10f64.ln()).abs() < 1e-15);
        assert!((log_at("2*3", 1).unwrap() - 6f64.ln()).abs() < 1e-15);
        // mixed signs fall back to the value route
        assert!((log_at("(0-2)*(0-3)", 1).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert!(log_at("(0-2)*3", 1).is_err());
    }

    #[test]
    fn k_zero_is_rejected() {
        assert!(matches!(log_at("k", 0), Err(Error::InvalidArgument(_))));
    }
}
