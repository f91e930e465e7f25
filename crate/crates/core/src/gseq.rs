//! Sequences of geometric numbers indexed from 1.
//!
//! A [`GSeq`] is either a closed form in `k`, a finite buffer, or a lazy view
//! built from other sequences (difference operators, projections, termwise
//! arithmetic). Views are evaluated on demand and never memoise; callers pass
//! explicit windows.
//!
//! Internally each term is produced as a double-double log so that chained
//! differences of polynomial exponents cancel exactly; [`GSeq::term`] rounds
//! to an ordinary [`GNum`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exprdsl::{self, ExprAst};
use crate::garith::GNum;
use crate::numerics::{Dd, NeumaierSum};
use crate::verdict::{self, check_tol, check_window, Probe, Verdict};
use crate::window::log_window;

#[derive(Debug)]
enum Node {
    Closed {
        ast: ExprAst,
        source: String,
    },
    Buffer(Vec<f64>),
    Binomial {
        inner: GSeq,
        order: u32,
        coeffs: Vec<Dd>,
    },
    Step {
        inner: GSeq,
    },
    Project {
        inner: GSeq,
        m: u32,
    },
    Sum(GSeq, GSeq),
    Product(GSeq, GSeq),
    Scale {
        alpha: f64,
        inner: GSeq,
    },
}

#[derive(Debug, Clone)]
pub struct GSeq {
    node: Arc<Node>,
}

impl GSeq {
    fn wrap(node: Node) -> Self {
        GSeq {
            node: Arc::new(node),
        }
    }

    pub fn from_ast(ast: ExprAst) -> Self {
        let source = ast.to_string();
        GSeq::wrap(Node::Closed { ast, source })
    }

    /// Closed form from DSL text.
    pub fn parse(src: &str) -> Result<Self> {
        let ast = exprdsl::parse(src)?;
        Ok(GSeq::wrap(Node::Closed {
            ast,
            source: src.trim().to_string(),
        }))
    }

    /// Finite buffer from term logs.
    pub fn from_logs(logs: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = logs.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteLog(bad));
        }
        Ok(GSeq::wrap(Node::Buffer(logs)))
    }

    /// Finite buffer from positive real values.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let logs = values
            .iter()
            .map(|&v| GNum::from_value(v).map(GNum::log_value))
            .collect::<Result<Vec<_>>>()?;
        Ok(GSeq::wrap(Node::Buffer(logs)))
    }

    pub fn from_terms(terms: &[GNum]) -> Self {
        GSeq::wrap(Node::Buffer(terms.iter().map(|g| g.log_value()).collect()))
    }

    /// The constant sequence `(c, c, c, ...)`.
    pub fn constant(c: GNum) -> Self {
        GSeq::from_ast(ExprAst::exp(ExprAst::Const(c.log_value())))
    }

    pub(crate) fn binomial(inner: GSeq, order: u32, coeffs: Vec<Dd>) -> Self {
        GSeq::wrap(Node::Binomial {
            inner,
            order,
            coeffs,
        })
    }

    pub(crate) fn step(inner: GSeq) -> Self {
        GSeq::wrap(Node::Step { inner })
    }

    pub(crate) fn project(inner: GSeq, m: u32) -> Self {
        GSeq::wrap(Node::Project { inner, m })
    }

    /// Termwise `x_k ⊕ y_k`.
    pub fn gadd_termwise(&self, other: &GSeq) -> GSeq {
        GSeq::wrap(Node::Sum(self.clone(), other.clone()))
    }

    /// Termwise `x_k ⊙ y_k`.
    pub fn gmul_termwise(&self, other: &GSeq) -> GSeq {
        GSeq::wrap(Node::Product(self.clone(), other.clone()))
    }

    /// Scalar multiple `α ⊙ x_k`.
    pub fn gscale(&self, alpha: GNum) -> GSeq {
        GSeq::wrap(Node::Scale {
            alpha: alpha.log_value(),
            inner: self.clone(),
        })
    }

    /// Number of available terms; `None` for infinite sequences.
    pub fn len(&self) -> Option<usize> {
        match &*self.node {
            Node::Closed { .. } => None,
            Node::Buffer(v) => Some(v.len()),
            Node::Binomial { inner, order, .. } => {
                inner.len().map(|l| l.saturating_sub(*order as usize))
            }
            Node::Step { inner } => inner.len().map(|l| l.saturating_sub(1)),
            Node::Project { inner, .. } | Node::Scale { inner, .. } => inner.len(),
            Node::Sum(a, b) | Node::Product(a, b) => match (a.len(), b.len()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The closed-form AST, if this is a closed form.
    pub fn ast(&self) -> Option<&ExprAst> {
        match &*self.node {
            Node::Closed { ast, .. } => Some(ast),
            _ => None,
        }
    }

    /// Double-double log of the `k`-th term.
    pub fn log_term_dd(&self, k: usize) -> Result<Dd> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "sequences are indexed from 1".into(),
            ));
        }
        match &*self.node {
            Node::Closed { ast, .. } => exprdsl::eval_log_dd(ast, k as u64),
            Node::Buffer(v) => v
                .get(k - 1)
                .map(|&u| Dd::from(u))
                .ok_or(Error::IndexOutOfRange {
                    index: k,
                    len: v.len(),
                }),
            Node::Binomial { inner, coeffs, .. } => {
                let mut acc = Dd::ZERO;
                for (v, c) in coeffs.iter().enumerate() {
                    acc += *c * inner.log_term_dd(k + v)?;
                }
                Ok(acc)
            }
            Node::Step { inner } => Ok(inner.log_term_dd(k)? - inner.log_term_dd(k + 1)?),
            Node::Project { inner, m } => {
                if k <= *m as usize {
                    // still validate the index against finite inputs
                    if let Some(len) = inner.len() {
                        if k > len {
                            return Err(Error::IndexOutOfRange { index: k, len });
                        }
                    }
                    Ok(Dd::ZERO)
                } else {
                    inner.log_term_dd(k)
                }
            }
            Node::Sum(a, b) => Ok(a.log_term_dd(k)? + b.log_term_dd(k)?),
            Node::Product(a, b) => Ok(a.log_term_dd(k)? * b.log_term_dd(k)?),
            Node::Scale { alpha, inner } => Ok(Dd::from(*alpha) * inner.log_term_dd(k)?),
        }
    }

    pub fn log_term(&self, k: usize) -> Result<f64> {
        self.log_term_dd(k).map(Dd::to_f64)
    }

    /// The `k`-th term.
    pub fn term(&self, k: usize) -> Result<GNum> {
        GNum::from_log(self.log_term(k)?)
    }
}

impl fmt::Display for GSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Closed { source, .. } => write!(f, "{source}"),
            Node::Buffer(v) => write!(f, "buffer[{}]", v.len()),
            Node::Binomial { inner, order, .. } => write!(f, "Δ^{order}({inner})"),
            Node::Step { inner } => write!(f, "Δ({inner})"),
            Node::Project { inner, m } => write!(f, "D_{m}({inner})"),
            Node::Sum(a, b) => write!(f, "({a}) ⊕ ({b})"),
            Node::Product(a, b) => write!(f, "({a}) ⊙ ({b})"),
            Node::Scale { alpha, inner } => write!(f, "e^{{{alpha}}} ⊙ ({inner})"),
        }
    }
}

pub fn term(x: &GSeq, k: usize) -> Result<GNum> {
    x.term(k)
}

/// Geometric partial sum `x_1 ⊕ ... ⊕ x_n`, i.e. the product of the first `n` terms.
pub fn gsum_partial(x: &GSeq, n: usize) -> Result<GNum> {
    check_window(n, 1)?;
    let logs = log_window(x, n)?;
    GNum::from_log(logs.iter().copied().collect::<NeumaierSum>().value())
}

/// `max_{k <= N} |x_k|^G`.
pub fn sup_gabs(x: &GSeq, n: usize) -> Result<GNum> {
    check_window(n, 1)?;
    let logs = log_window(x, n)?;
    GNum::from_log(logs.iter().fold(0.0f64, |m, u| m.max(u.abs())))
}

/// Geometric convergence of `x`: does `log x_k` settle to a finite limit?
/// The estimate is the extrapolated limit.
pub fn g_limit_probe(x: &GSeq, n: usize, tol: f64) -> Result<Verdict> {
    g_limit_probe_detailed(x, n, tol).map(|p| p.verdict)
}

pub fn g_limit_probe_detailed(x: &GSeq, n: usize, tol: f64) -> Result<Probe> {
    check_window(n, 4)?;
    check_tol(tol)?;
    let logs = log_window(x, 2 * n)?;
    Ok(verdict::cauchy_probe(&logs, n, tol))
}

/// Geometric convergence of `x` to the given limit: does `|x_k ⊖ target|^G → 1`?
pub fn g_limit_probe_toward(x: &GSeq, target: GNum, n: usize, tol: f64) -> Result<Probe> {
    check_window(n, 4)?;
    check_tol(tol)?;
    let logs = log_window(x, 2 * n)?;
    Ok(verdict::decay_probe(&logs, n, tol, target.log_value()))
}

/// Truncated remainder `a_{n+1} ⊕ ... ⊕ a_N` and a convergence verdict for
/// the whole geometric series, from its partial sums at `N/2`, `N` and `2N`.
pub fn remainder(a: &GSeq, n: usize, window: usize, tol: f64) -> Result<(GNum, Verdict)> {
    if n >= window {
        return Err(Error::InvalidArgument(format!(
            "remainder start {n} must be below the window {window}"
        )));
    }
    check_tol(tol)?;
    let probe_n = window.max(2);
    let logs = log_window(a, 2 * probe_n)?;
    let tail = logs[n..window]
        .iter()
        .copied()
        .collect::<NeumaierSum>()
        .value();
    let mut p = verdict::signed_series_probe(&logs, probe_n, tol);
    let tail_2n = logs[n..2 * probe_n]
        .iter()
        .copied()
        .collect::<NeumaierSum>()
        .value();
    p.verdict = Verdict::new(
        p.verdict.kind(),
        if p.verdict.is_finite() {
            GNum::from_log(tail_2n).ok()
        } else {
            None
        },
        window,
        verdict::Diagnostics {
            note: format!(
                "tail to N = {tail:e}, tail to 2N = {tail_2n:e}; {}",
                p.verdict.diagnostics().note
            ),
            probe_n: tail,
            probe_2n: tail_2n,
            ratio: p.verdict.diagnostics().ratio,
        },
    )?;
    Ok((GNum::from_log(tail)?, p.verdict))
}
