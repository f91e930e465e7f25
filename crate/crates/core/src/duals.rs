//! Köthe-Toeplitz duals of the difference spaces.
//!
//! * α-dual of `l∞(Δ^m_G)` and `c(Δ^m_G)`: `_G∑_k e^{k^m} ⊙ |a_k|^G < ∞`.
//! * αα-dual: `sup_k e^{k^{-m}} ⊙ |a_k|^G < ∞`.
//! * β- and γ-duals, first order only: `_G∑_k e^k ⊙ a_k` convergent (β) or with
//!   bounded partial sums (γ), and in both cases `_G∑_k |R_k|^G < ∞` where
//!   `R_k = _G∑_{j>k} a_j`.
//!
//! All checks run on log shadows: `e^{k^m} ⊙ |a_k|^G` has log `k^m |log a_k|`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::gdiff::DiffOrder;
use crate::gseq::GSeq;
use crate::numerics::NeumaierSum;
use crate::spaces::Membership;
use crate::verdict::{self, check_tol, check_window, Verdict, VerdictKind, DEFAULT_TOL};
use crate::window::log_window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Alpha,
    Beta,
    Gamma,
    AlphaAlpha,
}

impl fmt::Display for DualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualKind::Alpha => "alpha",
            DualKind::Beta => "beta",
            DualKind::Gamma => "gamma",
            DualKind::AlphaAlpha => "alpha_alpha",
        })
    }
}

impl FromStr for DualKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(DualKind::Alpha),
            "beta" => Ok(DualKind::Beta),
            "gamma" => Ok(DualKind::Gamma),
            "alpha_alpha" | "alpha-alpha" | "aa" => Ok(DualKind::AlphaAlpha),
            other => Err(Error::InvalidArgument(format!(
                "unknown dual kind '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DualRepr")]
pub struct DualReport {
    pub kind: DualKind,
    pub m: DiffOrder,
    pub verdict: Verdict,
    /// Partial sum (or running sup) of the tested statistic at `N`.
    pub partial_value: GNum,
    pub remainder_ok: Option<Verdict>,
}

#[derive(Deserialize)]
struct DualRepr {
    kind: DualKind,
    m: DiffOrder,
    verdict: Verdict,
    partial_value: GNum,
    remainder_ok: Option<Verdict>,
}

impl TryFrom<DualRepr> for DualReport {
    type Error = Error;
    fn try_from(r: DualRepr) -> Result<Self> {
        let needs_remainder = matches!(r.kind, DualKind::Beta | DualKind::Gamma);
        if needs_remainder != r.remainder_ok.is_some() {
            return Err(Error::InvalidArgument(format!(
                "{} report must {}carry a remainder verdict",
                r.kind,
                if needs_remainder { "" } else { "not " }
            )));
        }
        Ok(DualReport {
            kind: r.kind,
            m: r.m,
            verdict: r.verdict,
            partial_value: r.partial_value,
            remainder_ok: r.remainder_ok,
        })
    }
}

impl DualReport {
    pub fn membership(&self) -> Membership {
        let kinds = std::iter::once(self.verdict.kind())
            .chain(self.remainder_ok.as_ref().map(Verdict::kind));
        let mut out = Membership::Member;
        for k in kinds {
            match k {
                VerdictKind::Diverged => return Membership::NonMember,
                VerdictKind::Inconclusive => out = Membership::Inconclusive,
                VerdictKind::Finite => {}
            }
        }
        out
    }

    pub fn is_member(&self) -> bool {
        self.membership().is_member()
    }
}

fn weighted_logs(a: &GSeq, power: i32, len: usize) -> Result<Vec<f64>> {
    Ok(log_window(a, len)?
        .iter()
        .enumerate()
        .map(|(i, u)| ((i + 1) as f64).powi(power) * u.abs())
        .collect())
}

fn partial(values: &[f64], n: usize) -> Result<GNum> {
    GNum::from_log(values[..n].iter().copied().collect::<NeumaierSum>().value())
}

fn order_exponent(m: DiffOrder) -> Result<i32> {
    i32::try_from(m.0).map_err(|_| Error::InvalidArgument(format!("order {m} too large")))
}

/// Member of `[X(Δ^m_G)]^α` (X = l∞ or c) iff `Σ_k k^m |log a_k|` converges.
pub fn alpha_dual_test(a: &GSeq, m: DiffOrder, n: usize, tol: f64) -> Result<DualReport> {
    check_window(n, 4)?;
    check_tol(tol)?;
    let terms = weighted_logs(a, order_exponent(m)?, 2 * n)?;
    let probe = verdict::positive_series_probe(&terms, n, tol);
    Ok(DualReport {
        kind: DualKind::Alpha,
        m,
        verdict: probe.verdict,
        partial_value: partial(&terms, n)?,
        remainder_ok: None,
    })
}

/// Member of `[X(Δ^m_G)]^{αα}` iff `sup_k k^{-m} |log a_k|` is finite.
pub fn alpha_alpha_dual_test(a: &GSeq, m: DiffOrder, n: usize) -> Result<DualReport> {
    check_window(n, 4)?;
    let terms = weighted_logs(a, -order_exponent(m)?, 2 * n)?;
    let probe = verdict::sup_probe(&terms, n, DEFAULT_TOL);
    let sup = terms[..n].iter().copied().fold(0.0f64, f64::max);
    Ok(DualReport {
        kind: DualKind::AlphaAlpha,
        m,
        verdict: probe.verdict,
        partial_value: GNum::from_log(sup)?,
        remainder_ok: None,
    })
}

/// `_G∑_k |R_k|^G < ∞` with `log R_k = Σ_{k<j<=4N} log a_k`, probed on `k <= 2N`.
fn remainder_condition(logs: &[f64], n: usize, tol: f64) -> Result<Verdict> {
    let rem: Vec<f64> = verdict::suffix_remainders(logs)
        .iter()
        .map(|r| r.abs())
        .collect();
    let probe = verdict::positive_series_probe(&rem, n, tol);
    let v = probe.verdict;
    // the tails are cut at 4N; report the size of the last doubling as the truncation scale
    let cut = logs[2 * n..]
        .iter()
        .copied()
        .collect::<NeumaierSum>()
        .value();
    let d = v.diagnostics().clone();
    Verdict::new(
        v.kind(),
        v.estimate(),
        v.window(),
        verdict::Diagnostics {
            note: format!(
                "Σ|log R_k|, tails truncated at 4N (last-doubling tail {cut:e}); {}",
                d.note
            ),
            ..d
        },
    )
}

fn require_first_order(kind: DualKind, m: DiffOrder) -> Result<()> {
    if m.0 != 1 {
        return Err(Error::Unsupported(format!(
            "{kind}-dual is only characterised for m = 1, got m = {m}"
        )));
    }
    Ok(())
}

fn beta_gamma(a: &GSeq, kind: DualKind, m: DiffOrder, n: usize, tol: f64) -> Result<DualReport> {
    require_first_order(kind, m)?;
    check_window(n, 4)?;
    check_tol(tol)?;
    let logs = log_window(a, 4 * n)?;
    let terms: Vec<f64> = logs[..2 * n]
        .iter()
        .enumerate()
        .map(|(i, u)| (i + 1) as f64 * u)
        .collect();
    let probe = match kind {
        DualKind::Beta => verdict::signed_series_probe(&terms, n, tol),
        _ => verdict::bounded_partial_sums_probe(&terms, n, tol),
    };
    let remainder_ok = remainder_condition(&logs, n, tol)?;
    Ok(DualReport {
        kind,
        m,
        verdict: probe.verdict,
        partial_value: partial(&terms, n)?,
        remainder_ok: Some(remainder_ok),
    })
}

/// β-dual of `s l∞(Δ_G)` (m = 1): `Σ k log a_k` converges and `Σ |log R_k| < ∞`.
pub fn beta_dual_test(a: &GSeq, n: usize, tol: f64) -> Result<DualReport> {
    beta_gamma(a, DualKind::Beta, DiffOrder(1), n, tol)
}

/// γ-dual of `s l∞(Δ_G)` (m = 1): bounded partial sums of `Σ k log a_k` and `Σ |log R_k| < ∞`.
pub fn gamma_dual_test(a: &GSeq, n: usize, tol: f64) -> Result<DualReport> {
    beta_gamma(a, DualKind::Gamma, DiffOrder(1), n, tol)
}

/// Dispatch by kind; β and γ reject `m != 1` with [`Error::Unsupported`].
pub fn dual_test(a: &GSeq, kind: DualKind, m: DiffOrder, n: usize, tol: f64) -> Result<DualReport> {
    match kind {
        DualKind::Alpha => alpha_dual_test(a, m, n, tol),
        DualKind::AlphaAlpha => alpha_alpha_dual_test(a, m, n),
        DualKind::Beta | DualKind::Gamma => beta_gamma(a, kind, m, n, tol),
    }
}

/// Sparse sequence from the non-perfectness argument: picks indices
/// `k(1) < k(2) < ...` with `k(i)^{-m} |log a_{k(i)}| > i^m`, puts the geometric
/// inverse of `|a_{k(i)}|^G` there and the geometric zero elsewhere.
///
/// The result is a buffer of length `window`; its α-sum
/// `Σ k^m |log x_k|` stays below `Σ_i i^{-m}`.
pub fn counterexample_sequence(
    a: &GSeq,
    m: DiffOrder,
    count: usize,
    window: usize,
) -> Result<GSeq> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    check_window(window, 1)?;
    let logs = log_window(a, window)?;
    let p = order_exponent(m)?;
    let mut out = vec![0.0; window];
    let mut i = 1usize;
    for (idx, u) in logs.iter().enumerate() {
        if i > count {
            break;
        }
        let k = (idx + 1) as f64;
        let mag = u.abs();
        if k.powi(-p) * mag > (i as f64).powi(p) {
            out[idx] = GNum::from_log(mag)?.ginv()?.log_value();
            i += 1;
        }
    }
    if i <= count {
        return Err(Error::NoSubsequenceFound { window });
    }
    GSeq::from_logs(out)
}
