//! Geometric (multiplicative) calculus over the positive reals.
//!
//! Numbers are stored by their natural logarithm, so geometric addition is
//! multiplication of values and geometric multiplication is `x^{ln y}`. On top
//! of the scalar field the crate provides sequences, the generalised geometric
//! difference operator `Δ^m_G`, finite-window membership probes for the
//! difference spaces `l∞`, `c`, `c0` and their Köthe-Toeplitz duals, and a
//! small DSL for closed-form sequences in `k`.

pub mod catalog;
pub mod cli;
pub mod duals;
pub mod error;
pub mod exprdsl;
pub mod garith;
pub mod gdiff;
pub mod gseq;
pub mod numerics;
pub mod spaces;
pub mod verdict;
pub mod window;

pub use error::{Error, Result};
pub use garith::GNum;
pub use gdiff::DiffOrder;
pub use gseq::GSeq;
pub use verdict::{Verdict, VerdictKind};
