//! Finite-window membership in the difference spaces `l∞(Δ^m_G)`, `c(Δ^m_G)`
//! and `c0(Δ^m_G)`, plus the weighted-supremum diagnostics that characterise
//! boundedness of first differences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::gdiff::{delta_binomial, DiffOrder};
use crate::gseq::GSeq;
use crate::verdict::{self, check_tol, check_window, Probe, Verdict, VerdictKind, DEFAULT_TOL};
use crate::window::log_window;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Linf,
    C,
    C0,
}

impl Space {
    pub const ALL: [Space; 3] = [Space::C0, Space::C, Space::Linf];
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Linf => "linf",
            Space::C => "c",
            Space::C0 => "c0",
        })
    }
}

impl FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linf" => Ok(Space::Linf),
            "c" => Ok(Space::C),
            "c0" => Ok(Space::C0),
            other => Err(Error::InvalidArgument(format!("unknown space '{other}'"))),
        }
    }
}

/// Three-valued membership read off a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

impl Membership {
    pub fn from_kind(kind: VerdictKind) -> Self {
        match kind {
            VerdictKind::Finite => Membership::Member,
            VerdictKind::Diverged => Membership::NonMember,
            VerdictKind::Inconclusive => Membership::Inconclusive,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Membership::Member
        } else {
            Membership::NonMember
        }
    }

    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MembershipRepr")]
pub struct MembershipReport {
    pub space: Space,
    pub m: DiffOrder,
    pub verdict: Verdict,
    pub witness_index: Option<usize>,
    pub window: usize,
}

#[derive(Deserialize)]
struct MembershipRepr {
    space: Space,
    m: DiffOrder,
    verdict: Verdict,
    witness_index: Option<usize>,
    window: usize,
}

impl TryFrom<MembershipRepr> for MembershipReport {
    type Error = Error;
    fn try_from(r: MembershipRepr) -> Result<Self> {
        if r.verdict.is_diverged() && r.witness_index.is_none() {
            return Err(Error::InvalidArgument(
                "a divergent membership report needs a witness index".into(),
            ));
        }
        Ok(MembershipReport {
            space: r.space,
            m: r.m,
            verdict: r.verdict,
            witness_index: r.witness_index,
            window: r.window,
        })
    }
}

impl MembershipReport {
    pub fn membership(&self) -> Membership {
        Membership::from_kind(self.verdict.kind())
    }

    pub fn is_member(&self) -> bool {
        self.membership().is_member()
    }
}

/// Is `x` in `space(Δ^m_G)`? Applies `Δ^m_G`, then probes the result over the
/// windows up to `2N`: boundedness for `linf`, convergence for `c`, convergence
/// to the geometric zero for `c0`.
pub fn classify(
    x: &GSeq,
    space: Space,
    m: DiffOrder,
    n: usize,
    tol: f64,
) -> Result<MembershipReport> {
    check_window(n, 4)?;
    check_tol(tol)?;
    let d = delta_binomial(x, m)?;
    let logs = log_window(&d, 2 * n)?;
    let probe = match space {
        Space::Linf => {
            let mags: Vec<f64> = logs.iter().map(|u| u.abs()).collect();
            verdict::sup_probe(&mags, n, tol)
        }
        Space::C => verdict::cauchy_probe(&logs, n, tol),
        Space::C0 => verdict::decay_probe(&logs, n, tol, 0.0),
    };
    Ok(MembershipReport {
        space,
        m,
        verdict: probe.verdict,
        witness_index: probe.witness,
        window: n,
    })
}

fn weight(k: usize, exponent: f64) -> f64 {
    let kf = k as f64;
    if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        kf.powi(exponent as i32)
    } else {
        kf.powf(exponent)
    }
}

/// `sup_{k <= N} e^{k^w} ⊙ |Δ^d_G x_k|^G`, i.e. `exp(sup k^w |log Δ^d x_k|)`,
/// with a boundedness verdict from the probes at `N` and `2N`.
pub fn weighted_sup(
    x: &GSeq,
    diff_order: DiffOrder,
    weight_exp: f64,
    n: usize,
) -> Result<(GNum, Verdict)> {
    let (value, probe) = weighted_sup_probe(x, diff_order, weight_exp, n, DEFAULT_TOL)?;
    Ok((value, probe.verdict))
}

pub fn weighted_sup_probe(
    x: &GSeq,
    diff_order: DiffOrder,
    weight_exp: f64,
    n: usize,
    tol: f64,
) -> Result<(GNum, Probe)> {
    check_window(n, 2)?;
    check_tol(tol)?;
    let d = delta_binomial(x, diff_order)?;
    let logs = log_window(&d, 2 * n)?;
    let weighted: Vec<f64> = logs
        .iter()
        .enumerate()
        .map(|(i, u)| weight(i + 1, weight_exp) * u.abs())
        .collect();
    let sup = weighted[..n].iter().copied().fold(0.0f64, f64::max);
    Ok((GNum::from_log(sup)?, verdict::sup_probe(&weighted, n, tol)))
}

/// The three conditions of the first-difference boundedness lemma.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// `sup_k |x_k ⊖ x_{k+1}|^G < ∞`
    pub a: Verdict,
    /// `sup_k e^{k^{-1}} ⊙ |x_k|^G < ∞`
    pub b_i: Verdict,
    /// `sup_k |x_k ⊖ e^{k/(k+1)} ⊙ x_{k+1}|^G < ∞`
    pub b_ii: Verdict,
    pub agree: bool,
}

impl LemmaReport {
    pub fn any_inconclusive(&self) -> bool {
        [&self.a, &self.b_i, &self.b_ii]
            .iter()
            .any(|v| v.kind() == VerdictKind::Inconclusive)
    }
}

/// Evaluates (a), (b)(i) and (b)(ii) and whether (a) agrees with (b)(i) ∧ (b)(ii).
pub fn lemma_equivalence_check(x: &GSeq, n: usize) -> Result<LemmaReport> {
    lemma_equivalence_check_tol(x, n, DEFAULT_TOL)
}

pub fn lemma_equivalence_check_tol(x: &GSeq, n: usize, tol: f64) -> Result<LemmaReport> {
    check_window(n, 2)?;
    check_tol(tol)?;
    let u = log_window(x, 2 * n + 1)?;
    let (mut a, mut bi, mut bii) = (
        Vec::with_capacity(2 * n),
        Vec::with_capacity(2 * n),
        Vec::with_capacity(2 * n),
    );
    for i in 0..2 * n {
        let k = (i + 1) as f64;
        a.push((u[i] - u[i + 1]).abs());
        bi.push(u[i].abs() / k);
        bii.push((u[i] - k / (k + 1.0) * u[i + 1]).abs());
    }
    let a = verdict::sup_probe(&a, n, tol).verdict;
    let b_i = verdict::sup_probe(&bi, n, tol).verdict;
    let b_ii = verdict::sup_probe(&bii, n, tol).verdict;
    let both = match (b_i.kind(), b_ii.kind()) {
        (VerdictKind::Finite, VerdictKind::Finite) => VerdictKind::Finite,
        (VerdictKind::Diverged, _) | (_, VerdictKind::Diverged) => VerdictKind::Diverged,
        _ => VerdictKind::Inconclusive,
    };
    let agree = a.kind() == both && both != VerdictKind::Inconclusive;
    Ok(LemmaReport {
        a,
        b_i,
        b_ii,
        agree,
    })
}

fn witness_power(m: u32) -> Result<GSeq> {
    GSeq::parse(&format!("exp(k^{m})"))
}

/// Strict inclusion `c0(Δ^m) ⊊ c0(Δ^{m+1})` on the witness `(e^{k^m})`, together
/// with the chain `c0 ⊂ c ⊂ l∞` at both orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub m: DiffOrder,
    /// `c0(Δ^m)`: expected non-member.
    pub lower: MembershipReport,
    /// `c0(Δ^{m+1})`: expected member.
    pub upper: MembershipReport,
    /// `[c0, c, linf]` at order `m`.
    pub chain_lower: Vec<MembershipReport>,
    /// `[c0, c, linf]` at order `m + 1`.
    pub chain_upper: Vec<MembershipReport>,
    pub passed: bool,
}

fn chain_holds(chain: &[MembershipReport]) -> bool {
    // c0 member ⇒ c member ⇒ linf member, with no inconclusive links
    chain
        .iter()
        .all(|r| r.membership() != Membership::Inconclusive)
        && chain
            .windows(2)
            .all(|w| !w[0].is_member() || w[1].is_member())
}

pub fn inclusion_demo(m: DiffOrder, n: usize) -> Result<InclusionReport> {
    if m.0 < 1 {
        return Err(Error::InvalidArgument("inclusion demo needs m >= 1".into()));
    }
    let x = witness_power(m.0)?;
    let next = DiffOrder(m.0 + 1);
    let chain = |order: DiffOrder| -> Result<Vec<MembershipReport>> {
        Space::ALL
            .iter()
            .map(|&s| classify(&x, s, order, n, DEFAULT_TOL))
            .collect()
    };
    let chain_lower = chain(m)?;
    let chain_upper = chain(next)?;
    let lower = chain_lower[0].clone();
    let upper = chain_upper[0].clone();
    let passed = upper.is_member()
        && lower.membership() == Membership::NonMember
        && chain_holds(&chain_lower)
        && chain_holds(&chain_upper);
    Ok(InclusionReport {
        m,
        lower,
        upper,
        chain_lower,
        chain_upper,
        passed,
    })
}

/// `x = (e^k)` and `y = (e^{k^{m-1}})` lie in `c0(Δ^m)` but `x ⊙ y = (e^{k^m})`
/// does not, so the space is not closed under termwise `⊙`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub m: DiffOrder,
    pub x: MembershipReport,
    pub y: MembershipReport,
    pub product: MembershipReport,
    pub passed: bool,
}

pub fn algebra_counterexample(m: DiffOrder, n: usize) -> Result<AlgebraReport> {
    if m.0 < 2 {
        return Err(Error::InvalidArgument(
            "algebra counterexample needs m >= 2".into(),
        ));
    }
    let x = GSeq::parse("exp(k)")?;
    let y = witness_power(m.0 - 1)?;
    let xy = x.gmul_termwise(&y);
    let rx = classify(&x, Space::C0, m, n, DEFAULT_TOL)?;
    let ry = classify(&y, Space::C0, m, n, DEFAULT_TOL)?;
    let rxy = classify(&xy, Space::C0, m, n, DEFAULT_TOL)?;
    let passed = rx.is_member() && ry.is_member() && rxy.membership() == Membership::NonMember;
    Ok(AlgebraReport {
        m,
        x: rx,
        y: ry,
        product: rxy,
        passed,
    })
}
