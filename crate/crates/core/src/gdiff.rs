//! The geometric difference operator `Δ^m_G`, its norm, and the projection `D`.
//!
//! `Δ^m_G x_k = _G∑_{v=0}^m (⊖e)^{v_G} ⊙ e^{C(m,v)} ⊙ x_{k+v}`, whose log is the
//! classical forward difference of the term logs with the sign convention
//! `x_k - x_{k+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::gseq::{sup_gabs, GSeq};
use crate::numerics::Dd;
use crate::verdict::check_window;

/// Largest supported difference order; `C(60, 30)` still fits comfortably in 64 bits.
pub const MAX_ORDER: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiffOrder(pub u32);

impl DiffOrder {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl From<u32> for DiffOrder {
    fn from(m: u32) -> Self {
        DiffOrder(m)
    }
}

impl fmt::Display for DiffOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Row `m` of Pascal's triangle, built by the additive recurrence in exact integers.
pub fn binomial_row(m: u32) -> Result<Vec<u64>> {
    if m > MAX_ORDER {
        return Err(Error::Overflow(format!(
            "difference order {m} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for w in row.windows(2) {
            let c = w[0]
                .checked_add(w[1])
                .ok_or_else(|| Error::Overflow("binomial coefficient".into()))?;
            next.push(c);
        }
        next.push(1);
        row = next;
    }
    Ok(row)
}

/// `Δ^m_G x` via the closed binomial form. Each term costs `m + 1` lookups.
pub fn delta_binomial(x: &GSeq, m: DiffOrder) -> Result<GSeq> {
    if m.0 == 0 {
        return Ok(x.clone());
    }
    let coeffs = binomial_row(m.0)?
        .into_iter()
        .enumerate()
        .map(|(v, c)| {
            let c = Dd::from_i128(c as i128);
            if v % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    Ok(GSeq::binomial(x.clone(), m.0, coeffs))
}

/// `Δ^m_G x` by the defining recursion `Δ^{m-1}_G x_k ⊖ Δ^{m-1}_G x_{k+1}`.
///
/// Term evaluation visits `2^m` leaves; it exists to cross-check
/// [`delta_binomial`] and is not meant for large orders.
pub fn delta_recursive(x: &GSeq, m: DiffOrder) -> Result<GSeq> {
    if m.0 > MAX_ORDER {
        return Err(Error::Overflow(format!(
            "difference order {} exceeds the supported maximum {MAX_ORDER}",
            m.0
        )));
    }
    Ok((0..m.0).fold(x.clone(), |acc, _| GSeq::step(acc)))
}

/// `Δ^m_G x`.
pub fn delta(x: &GSeq, m: DiffOrder) -> Result<GSeq> {
    delta_binomial(x, m)
}

/// Window proxy of `‖x‖_Δ = _G∑_{i=1}^m |x_i|^G ⊕ sup_k |Δ^m_G x_k|^G`, sup over `k <= N`.
pub fn delta_norm(x: &GSeq, m: DiffOrder, n: usize) -> Result<GNum> {
    check_window(n, 1)?;
    let mut head = GNum::ZERO;
    for i in 1..=m.0 as usize {
        head = head.gadd(x.term(i)?.gabs());
    }
    let sup = sup_gabs(&delta_binomial(x, m)?, n)?;
    head.gadd(sup).checked()
}

/// `Dx = (1, ..., 1, x_{m+1}, x_{m+2}, ...)`.
pub fn d_operator(x: &GSeq, m: DiffOrder) -> GSeq {
    if m.0 == 0 {
        return x.clone();
    }
    GSeq::project(x.clone(), m.0)
}
