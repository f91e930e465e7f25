//! Geometric arithmetic over the positive reals.
//!
//! A [`GNum`] stores only the natural logarithm of the value it represents.
//! Under that isomorphism geometric addition is addition of logs, geometric
//! multiplication is multiplication of logs, and so on, so every operation here
//! is a single floating-point operation on the stored log.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-domain threshold below which a divisor counts as the geometric zero.
pub const TAU_ZERO: f64 = 1e-12;

/// A positive real number `exp(log_value)`.
///
/// The geometric zero is `1` (log 0) and the geometric identity is `e` (log 1).
/// Ordering follows the log, which is the usual order on the represented values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GNumRepr", into = "GNumRepr")]
pub struct GNum {
    log_value: f64,
}

#[derive(Serialize, Deserialize)]
struct GNumRepr {
    log_value: f64,
}

impl TryFrom<GNumRepr> for GNum {
    type Error = Error;
    fn try_from(r: GNumRepr) -> Result<Self> {
        GNum::from_log(r.log_value)
    }
}

impl From<GNum> for GNumRepr {
    fn from(g: GNum) -> Self {
        GNumRepr {
            log_value: g.log_value,
        }
    }
}

impl GNum {
    /// Geometric zero, the real number 1.
    pub const ZERO: GNum = GNum { log_value: 0.0 };
    /// Geometric identity, the real number e.
    pub const ONE: GNum = GNum { log_value: 1.0 };

    pub fn from_value(v: f64) -> Result<Self> {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::NonPositiveValue(v));
        }
        Self::from_log(v.ln())
    }

    pub fn from_log(u: f64) -> Result<Self> {
        if u.is_finite() {
            Ok(GNum { log_value: u })
        } else {
            Err(Error::NonFiniteLog(u))
        }
    }

    /// Embeds the integer `n` as the geometric integer `e^n`.
    pub fn natural(n: i64) -> Self {
        GNum {
            log_value: n as f64,
        }
    }

    #[inline]
    pub fn log_value(self) -> f64 {
        self.log_value
    }

    /// The represented real; may overflow to infinity for large logs.
    pub fn value(self) -> f64 {
        self.log_value.exp()
    }

    pub fn is_geometric_zero(self) -> bool {
        self.log_value.abs() < TAU_ZERO
    }

    // gmul and gpow can push the log past f64::MAX; see `checked`.

    pub fn gadd(self, y: GNum) -> GNum {
        GNum {
            log_value: self.log_value + y.log_value,
        }
    }

    pub fn gsub(self, y: GNum) -> GNum {
        GNum {
            log_value: self.log_value - y.log_value,
        }
    }

    pub fn gmul(self, y: GNum) -> GNum {
        GNum {
            log_value: self.log_value * y.log_value,
        }
    }

    pub fn gdiv(self, y: GNum) -> Result<GNum> {
        if y.is_geometric_zero() {
            return Err(Error::GeometricZeroDivisor);
        }
        Ok(GNum {
            log_value: self.log_value / y.log_value,
        })
    }

    /// `|x|^G = max(x, 1/x)`; never below the geometric zero.
    pub fn gabs(self) -> GNum {
        GNum {
            log_value: self.log_value.abs(),
        }
    }

    /// Geometric power `x^{p_G} = x ⊙ x ⊙ ... ⊙ x` (p factors); `p = 0` gives `e`.
    pub fn gpow(self, p: u32) -> GNum {
        GNum {
            log_value: self.log_value.powi(p as i32),
        }
    }

    /// Geometric inverse, `e^{1/log x}`.
    pub fn ginv(self) -> Result<GNum> {
        if self.is_geometric_zero() {
            return Err(Error::GeometricZeroDivisor);
        }
        Ok(GNum {
            log_value: 1.0 / self.log_value,
        })
    }

    /// Geometric negation `⊖x = 1 ⊖ x`.
    pub fn gneg(self) -> GNum {
        GNum {
            log_value: -self.log_value,
        }
    }

    /// Checks the stored log is still finite, e.g. after chained `gmul`.
    pub fn checked(self) -> Result<GNum> {
        GNum::from_log(self.log_value)
    }

    /// Text rendering `e^{log}`.
    pub fn render(self) -> String {
        format!("e^{{{}}}", self.log_value)
    }
}

impl PartialOrd for GNum {
    fn partial_cmp(&self, other: &GNum) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Eq for GNum {}

impl Ord for GNum {
    fn cmp(&self, other: &GNum) -> Ordering {
        self.log_value.total_cmp(&other.log_value)
    }
}

impl fmt::Display for GNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{{{}}}", self.log_value)
    }
}

/// Free-function spellings of the geometric operations.
pub fn gadd(x: GNum, y: GNum) -> GNum {
    x.gadd(y)
}

pub fn gsub(x: GNum, y: GNum) -> GNum {
    x.gsub(y)
}

pub fn gmul(x: GNum, y: GNum) -> GNum {
    x.gmul(y)
}

pub fn gdiv(x: GNum, y: GNum) -> Result<GNum> {
    x.gdiv(y)
}

pub fn gabs(x: GNum) -> GNum {
    x.gabs()
}

pub fn gpow(x: GNum, p: u32) -> GNum {
    x.gpow(p)
}

pub fn ginv(x: GNum) -> Result<GNum> {
    x.ginv()
}

pub fn natural(n: i64) -> GNum {
    GNum::natural(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(u: f64) -> GNum {
        GNum::from_log(u).unwrap()
    }

    #[test]
    fn gadd_examples() {
        assert_eq!(gadd(g(2.0), g(3.0)), g(5.0));
        let x = GNum::from_value(7.5).unwrap();
        assert_eq!(gadd(x, GNum::from_value(1.0).unwrap()), x);
        let six = gadd(
            GNum::from_value(2.0).unwrap(),
            GNum::from_value(3.0).unwrap(),
        );
        assert!((six.value() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn gsub_examples() {
        assert_eq!(gsub(g(5.0), g(2.0)), g(3.0));
        let x = g(0.37);
        assert_eq!(gsub(x, x), GNum::ZERO);
        assert_eq!(gsub(GNum::ZERO, GNum::ONE), g(-1.0));
    }

    #[test]
    fn gmul_examples() {
        assert_eq!(gmul(g(2.0), g(3.0)), g(6.0));
        let x = g(-4.25);
        assert_eq!(gmul(x, GNum::ONE), x);
        let two = GNum::from_value(2.0).unwrap();
        let ln2 = 2f64.ln();
        assert_eq!(gmul(two, two).log_value(), ln2 * ln2);
        assert!((gmul(two, two).value() - 1.616_806_672_241_674_5).abs() < 1e-14);
    }

    #[test]
    fn gdiv_examples() {
        assert_eq!(gdiv(g(6.0), g(3.0)).unwrap(), g(2.0));
        let x = g(1.7);
        assert_eq!(gdiv(x, x).unwrap(), GNum::ONE);
        assert_eq!(gdiv(g(5.0), GNum::ZERO), Err(Error::GeometricZeroDivisor));
        assert_eq!(gdiv(g(5.0), g(1e-13)), Err(Error::GeometricZeroDivisor));
    }

    #[test]
    fn gabs_examples() {
        assert_eq!(gabs(g(-3.0)), g(3.0));
        assert_eq!(gabs(GNum::ZERO), GNum::ZERO);
        assert_eq!(gabs(g(2.5)), g(2.5));
    }

    #[test]
    fn gpow_examples() {
        assert_eq!(gpow(g(2.0), 3), g(8.0));
        let x = g(1.3);
        assert_eq!(gpow(x, 2), gmul(x, x));
        for v in 0..6u32 {
            assert_eq!(gpow(g(-1.0), v), g((-1f64).powi(v as i32)));
        }
        assert_eq!(gpow(g(-1.0), 0), GNum::ONE);
    }

    #[test]
    fn ginv_examples() {
        assert_eq!(ginv(g(2.0)).unwrap(), g(0.5));
        assert_eq!(ginv(GNum::ZERO), Err(Error::GeometricZeroDivisor));
    }

    #[test]
    fn natural_examples() {
        assert_eq!(natural(0), GNum::ZERO);
        assert_eq!(natural(1), GNum::ONE);
        assert_eq!(natural(5), g(5.0));
    }

    #[test]
    fn constructors_reject_invalid_input() {
        assert_eq!(GNum::from_value(0.0), Err(Error::NonPositiveValue(0.0)));
        assert_eq!(GNum::from_value(-2.0), Err(Error::NonPositiveValue(-2.0)));
        assert!(GNum::from_log(f64::INFINITY).is_err());
        assert!(GNum::from_log(f64::NAN).is_err());
        assert!(GNum::from_value(f64::INFINITY).is_err());
    }

    #[test]
    fn order_follows_log() {
        assert!(g(-1.0) < GNum::ZERO);
        assert!(GNum::ZERO < GNum::ONE);
        assert_eq!(g(3.0).max(g(2.0)), g(3.0));
    }

    #[test]
    fn serde_rejects_non_finite() {
        let s = serde_json::to_string(&g(1.25)).unwrap();
        assert_eq!(s, r#"{"log_value":1.25}"#);
        assert_eq!(serde_json::from_str::<GNum>(&s).unwrap(), g(1.25));
    }

    fn log() -> impl Strategy<Value = f64> {
        -50.0f64..50.0
    }

    proptest! {
        #[test]
        fn log_isomorphism_is_exact(a in log(), b in log()) {
            let (x, y) = (g(a), g(b));
            prop_assert_eq!(gadd(x, y).log_value(), a + b);
            prop_assert_eq!(gsub(x, y).log_value(), a - b);
            prop_assert_eq!(gmul(x, y).log_value(), a * b);
            if b.abs() >= TAU_ZERO {
                prop_assert_eq!(gdiv(x, y).unwrap().log_value(), a / b);
            }
        }

        #[test]
        fn gadd_is_a_commutative_monoid(a in log(), b in log(), c in log()) {
            let (x, y, z) = (g(a), g(b), g(c));
            prop_assert_eq!(gadd(x, y), gadd(y, x));
            let l = gadd(gadd(x, y), z).log_value();
            let r = gadd(x, gadd(y, z)).log_value();
            prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
            prop_assert_eq!(gadd(x, GNum::ZERO), x);
        }

        #[test]
        fn n_fold_gadd_is_natural_gmul(a in log(), n in 0i64..40) {
            let x = g(a);
            let folded = (0..n).fold(GNum::ZERO, |acc, _| gadd(acc, x));
            let scaled = gmul(natural(n), x);
            prop_assert!((folded.log_value() - scaled.log_value()).abs() <= 1e-12 * scaled.log_value().abs().max(1.0));
        }

        #[test]
        fn square_root_of_square_is_gabs(a in log()) {
            let x = g(a);
            let root = gpow(x, 2).log_value().sqrt();
            prop_assert!((root - gabs(x).log_value()).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
