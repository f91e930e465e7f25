//! Finite-window verdicts for "< ∞" and limit claims.
//!
//! Each protocol evaluates a statistic on the windows ending at `N/2`, `N` and
//! `2N`. Writing `g1` and `g2` for the change of the statistic over the last two
//! doublings:
//!
//! * `g2` below `tol` (scaled by `max(1, |statistic|)`) resolves as finite;
//! * otherwise the doubling ratio `r = g2 / g1` decides: `r <= 0.8` means the
//!   increments shrink geometrically per doubling (power-law decay, summable),
//!   `r >= 0.95` means they do not shrink, and anything between is inconclusive.
//!
//! Any statistic whose magnitude passes [`DIVERGENCE_MAGNITUDE`] inside the
//! window is declared divergent at the first index where that happens.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::numerics::{prefix_sums, NeumaierSum};

pub const DEFAULT_N: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DIVERGENCE_MAGNITUDE: f64 = 1e6;
pub const RATIO_CONVERGENT: f64 = 0.8;
pub const RATIO_DIVERGENT: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// Converged, bounded or summable.
    Finite,
    /// Divergent, unbounded or not convergent to the probed limit.
    Diverged,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub note: String,
    #[serde(rename = "probe_N")]
    pub probe_n: f64,
    #[serde(rename = "probe_2N")]
    pub probe_2n: f64,
    /// Doubling ratio `g2 / g1`; absent when undefined.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VerdictRepr", into = "VerdictRepr")]
pub struct Verdict {
    kind: VerdictKind,
    estimate: Option<GNum>,
    window: usize,
    diagnostics: Diagnostics,
}

#[derive(Serialize, Deserialize)]
struct VerdictRepr {
    kind: VerdictKind,
    estimate_log: Option<f64>,
    window: usize,
    diagnostics: Diagnostics,
}

impl TryFrom<VerdictRepr> for Verdict {
    type Error = Error;
    fn try_from(r: VerdictRepr) -> Result<Self> {
        let estimate = r.estimate_log.map(GNum::from_log).transpose()?;
        Verdict::new(r.kind, estimate, r.window, r.diagnostics)
    }
}

impl From<Verdict> for VerdictRepr {
    fn from(v: Verdict) -> Self {
        VerdictRepr {
            kind: v.kind,
            estimate_log: v.estimate.map(GNum::log_value),
            window: v.window,
            diagnostics: v.diagnostics,
        }
    }
}

impl Verdict {
    pub fn new(
        kind: VerdictKind,
        estimate: Option<GNum>,
        window: usize,
        diagnostics: Diagnostics,
    ) -> Result<Self> {
        if kind == VerdictKind::Finite && estimate.is_none() {
            return Err(Error::InvalidArgument(
                "a finite verdict needs an estimate".into(),
            ));
        }
        if window == 0 {
            return Err(Error::InvalidArgument("window must be positive".into()));
        }
        Ok(Verdict {
            kind,
            estimate,
            window,
            diagnostics,
        })
    }

    pub fn kind(&self) -> VerdictKind {
        self.kind
    }

    pub fn is_finite(&self) -> bool {
        self.kind == VerdictKind::Finite
    }

    pub fn is_diverged(&self) -> bool {
        self.kind == VerdictKind::Diverged
    }

    pub fn estimate(&self) -> Option<GNum> {
        self.estimate
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }
}

/// A verdict together with the index that triggered a divergent call.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub verdict: Verdict,
    pub witness: Option<usize>,
}

pub(crate) fn check_window(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "window N = {n} is below the minimum {min}"
        )));
    }
    Ok(())
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Classification of two successive doubling increments.
fn judge(g1: f64, g2: f64, threshold: f64) -> (VerdictKind, Option<f64>) {
    let ratio = if g1 > 0.0 { Some(g2 / g1) } else { None };
    if g2 <= threshold {
        return (VerdictKind::Finite, ratio);
    }
    let r = ratio.unwrap_or(f64::INFINITY);
    let kind = if r <= RATIO_CONVERGENT {
        VerdictKind::Finite
    } else if r >= RATIO_DIVERGENT {
        VerdictKind::Diverged
    } else {
        VerdictKind::Inconclusive
    };
    (kind, ratio)
}

fn first_exceeding(values: &[f64], from: usize) -> Option<usize> {
    values[from..]
        .iter()
        .position(|v| v.abs() > DIVERGENCE_MAGNITUDE)
        .map(|i| from + i + 1)
}

fn argmax(values: &[f64], lo: usize, hi: usize) -> usize {
    let mut best = lo;
    for i in lo..hi {
        if values[i] > values[best] {
            best = i;
        }
    }
    best + 1
}

fn diverged_by_magnitude(k: usize, n: usize, probe_n: f64, probe_2n: f64) -> Probe {
    let diagnostics = Diagnostics {
        note: format!("magnitude exceeds {DIVERGENCE_MAGNITUDE:e} at k = {k}"),
        probe_n,
        probe_2n,
        ratio: None,
    };
    Probe {
        verdict: Verdict {
            kind: VerdictKind::Diverged,
            estimate: None,
            window: n,
            diagnostics,
        },
        witness: Some(k),
    }
}

fn make(
    kind: VerdictKind,
    estimate: f64,
    n: usize,
    diagnostics: Diagnostics,
    witness: usize,
) -> Probe {
    let estimate = GNum::from_log(estimate).ok();
    let kind = if kind == VerdictKind::Finite && estimate.is_none() {
        VerdictKind::Inconclusive
    } else {
        kind
    };
    Probe {
        verdict: Verdict {
            kind,
            estimate: if kind == VerdictKind::Diverged {
                None
            } else {
                estimate
            },
            window: n,
            diagnostics,
        },
        witness: (kind == VerdictKind::Diverged).then_some(witness),
    }
}

fn require_len(values: &[f64], n: usize) {
    assert!(n >= 2 && values.len() >= 2 * n, "probe needs 2N values");
}

/// Boundedness of non-negative magnitudes `f_1, f_2, ...`: is `sup_k f_k < ∞`?
/// `values` must hold at least `2N` entries.
pub fn sup_probe(values: &[f64], n: usize, tol: f64) -> Probe {
    require_len(values, n);
    let half = n / 2;
    let s = |m: usize| values[..m].iter().copied().fold(0.0f64, f64::max);
    let (s_half, s_n, s_2n) = (s(half), s(n), s(2 * n));
    if let Some(k) = first_exceeding(&values[..2 * n], 0) {
        return diverged_by_magnitude(k, n, s_n, s_2n);
    }
    let (kind, ratio) = judge(s_n - s_half, s_2n - s_n, tol * s_n.max(1.0));
    let diagnostics = Diagnostics {
        note: "running supremum at N/2, N, 2N".into(),
        probe_n: s_n,
        probe_2n: s_2n,
        ratio,
    };
    make(kind, s_2n, n, diagnostics, argmax(values, n, 2 * n))
}

/// Convergence of a series of non-negative terms.
pub fn positive_series_probe(terms: &[f64], n: usize, tol: f64) -> Probe {
    require_len(terms, n);
    let sums = prefix_sums(&terms[..2 * n]);
    let (p_half, p_n, p_2n) = (sums[n / 2 - 1], sums[n - 1], sums[2 * n - 1]);
    if let Some(k) = first_exceeding(&sums, 0) {
        return diverged_by_magnitude(k, n, p_n, p_2n);
    }
    let (kind, ratio) = judge(p_n - p_half, p_2n - p_n, tol * p_n.abs().max(1.0));
    let diagnostics = Diagnostics {
        note: "partial sums at N/2, N, 2N".into(),
        probe_n: p_n,
        probe_2n: p_2n,
        ratio,
    };
    make(kind, p_2n, n, diagnostics, 2 * n)
}

fn oscillation(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    hi - lo
}

/// Aitken extrapolation from three probes when they approach monotonically,
/// otherwise the last probe.
fn extrapolate(x0: f64, x1: f64, x2: f64) -> f64 {
    let (d1, d2) = (x1 - x0, x2 - x1);
    if d1 * d2 > 0.0 && d2.abs() < d1.abs() {
        x2 - d2 * d2 / (d2 - d1)
    } else {
        x2
    }
}

/// Cauchy probe: does `v_k` converge to some finite limit?
///
/// Compares the oscillation of `v` over `[N/2, N]` and `[N, 2N]`.
pub fn cauchy_probe(values: &[f64], n: usize, tol: f64) -> Probe {
    require_len(values, n);
    let half = n / 2;
    let (x0, x1, x2) = (values[half - 1], values[n - 1], values[2 * n - 1]);
    if let Some(k) = first_exceeding(&values[..2 * n], half - 1) {
        return diverged_by_magnitude(k, n, x1, x2);
    }
    let osc1 = oscillation(&values[half - 1..n]);
    let osc2 = oscillation(&values[n - 1..2 * n]);
    let scale = values[n - 1..2 * n]
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let (kind, ratio) = judge(osc1, osc2, tol * scale);
    let estimate = extrapolate(x0, x1, x2);
    let deviations: Vec<f64> = values.iter().map(|v| (v - estimate).abs()).collect();
    let diagnostics = Diagnostics {
        note: format!("oscillation over [N/2, N] = {osc1:e}, over [N, 2N] = {osc2:e}"),
        probe_n: x1,
        probe_2n: x2,
        ratio,
    };
    make(
        kind,
        estimate,
        n,
        diagnostics,
        argmax(&deviations, n - 1, 2 * n),
    )
}

/// Does `v_k` tend to `target`? Compares `max |v_k - target|` over the
/// windows `[N/2, N]` and `[N, 2N]`.
pub fn decay_probe(values: &[f64], n: usize, tol: f64, target: f64) -> Probe {
    require_len(values, n);
    let half = n / 2;
    if let Some(k) = first_exceeding(&values[..2 * n], half - 1) {
        return diverged_by_magnitude(k, n, values[n - 1], values[2 * n - 1]);
    }
    let dev: Vec<f64> = values[..2 * n].iter().map(|v| (v - target).abs()).collect();
    let t1 = dev[half - 1..n].iter().copied().fold(0.0, f64::max);
    let t2 = dev[n - 1..2 * n].iter().copied().fold(0.0, f64::max);
    let (kind, ratio) = if t2 <= tol {
        (VerdictKind::Finite, (t1 > 0.0).then(|| t2 / t1))
    } else {
        // decay toward the target must be strict; no shrinkage means the gap persists
        judge(t1, t2, tol)
    };
    let diagnostics = Diagnostics {
        note: format!("max |x_k - target| over [N/2, N] = {t1:e}, over [N, 2N] = {t2:e}"),
        probe_n: values[n - 1],
        probe_2n: values[2 * n - 1],
        ratio,
    };
    make(kind, target, n, diagnostics, argmax(&dev, n - 1, 2 * n))
}

/// Convergence of a signed series: Cauchy probe on its partial sums.
pub fn signed_series_probe(terms: &[f64], n: usize, tol: f64) -> Probe {
    require_len(terms, n);
    let sums = prefix_sums(&terms[..2 * n]);
    let mut p = cauchy_probe(&sums, n, tol);
    p.verdict.diagnostics.note = format!("partial sums; {}", p.verdict.diagnostics.note);
    p
}

/// `sup_n |s_n|` for partial sums `s_n` of a signed series.
pub fn bounded_partial_sums_probe(terms: &[f64], n: usize, tol: f64) -> Probe {
    require_len(terms, n);
    let sums: Vec<f64> = prefix_sums(&terms[..2 * n])
        .iter()
        .map(|s| s.abs())
        .collect();
    let mut p = sup_probe(&sums, n, tol);
    p.verdict.diagnostics.note = format!("|partial sums|; {}", p.verdict.diagnostics.note);
    p
}

/// Compensated tail sums `R_k = t_{k+1} + ... + t_H` for `k = 1..H`, accumulated from the end.
pub fn suffix_remainders(terms: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    let mut out = vec![0.0; terms.len()];
    for i in (0..terms.len()).rev() {
        out[i] = acc.value();
        acc.add(terms[i]);
    }
    out
}
