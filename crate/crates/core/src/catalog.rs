//! Named sequences with analytic ground truth for membership and dual tests.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::duals::DualKind;
use crate::error::Result;
use crate::gdiff::DiffOrder;
use crate::gseq::GSeq;
use crate::spaces::Space;

/// Length of the alternating buffer: enough for the dual probes (which read
/// up to `4N`) at twice the default window.
pub const ALTERNATING_LEN: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "name")]
pub enum Target {
    Space(Space),
    Dual(DualKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProvenanceTag {
    /// Asserted in the source literature.
    #[serde(rename = "PAPER")]
    Paper,
    /// Derived from a named classical oracle.
    #[serde(rename = "DERIVED")]
    Derived,
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tag: ProvenanceTag,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub target: Target,
    pub m: DiffOrder,
    pub expected: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    Expr(String),
    Buffer { generator: String, len: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub definition: Definition,
    pub annotations: Vec<Annotation>,
    #[serde(skip)]
    seq: GSeq,
}

impl CatalogEntry {
    pub fn seq(&self) -> &GSeq {
        &self.seq
    }

    pub fn expected(&self, target: Target, m: u32) -> Option<bool> {
        self.annotations
            .iter()
            .find(|a| a.target == target && a.m.0 == m)
            .map(|a| a.expected)
    }
}

/// Ground truth for one entry, written in terms of the shape of the term logs
/// `u_k` and their differences.
struct Truth {
    /// `Δ^m u` bounded / convergent / null, for `m = 0..=MAX_M`.
    spaces: fn(Space, u32) -> bool,
    alpha: fn(u32) -> bool,
    alpha_alpha: fn(u32) -> bool,
    beta: bool,
    gamma: bool,
    tag: ProvenanceTag,
    space_note: &'static str,
    dual_note: &'static str,
}

const MAX_M: u32 = 5;

fn annotate(t: &Truth) -> Vec<Annotation> {
    let prov = |note: &str| Provenance {
        tag: t.tag,
        note: note.to_string(),
    };
    let mut out = Vec::new();
    for m in 0..=MAX_M {
        for space in Space::ALL {
            out.push(Annotation {
                target: Target::Space(space),
                m: DiffOrder(m),
                expected: (t.spaces)(space, m),
                provenance: prov(t.space_note),
            });
        }
    }
    for m in 1..=3 {
        out.push(Annotation {
            target: Target::Dual(DualKind::Alpha),
            m: DiffOrder(m),
            expected: (t.alpha)(m),
            provenance: prov(t.dual_note),
        });
        out.push(Annotation {
            target: Target::Dual(DualKind::AlphaAlpha),
            m: DiffOrder(m),
            expected: (t.alpha_alpha)(m),
            provenance: prov(t.dual_note),
        });
    }
    for (kind, expected) in [(DualKind::Beta, t.beta), (DualKind::Gamma, t.gamma)] {
        out.push(Annotation {
            target: Target::Dual(kind),
            m: DiffOrder(1),
            expected,
            provenance: prov(t.dual_note),
        });
    }
    out
}

/// Δ^m of a degree-p polynomial exponent: unbounded below order p, the
/// nonzero constant ±p! at order p, identically zero above.
fn poly_spaces(p: u32, space: Space, m: u32) -> bool {
    match space {
        Space::Linf | Space::C => m >= p,
        Space::C0 => m > p,
    }
}

fn entry(name: &str, src: &str, t: Truth) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        definition: Definition::Expr(src.to_string()),
        annotations: annotate(&t),
        seq: GSeq::parse(src).expect("catalog sources parse"),
    }
}

fn always(_: u32) -> bool {
    true
}

fn never(_: u32) -> bool {
    false
}

fn null_everywhere(_: Space, _: u32) -> bool {
    true
}

fn build() -> Vec<CatalogEntry> {
    const WITNESS: &str = "(m+1)-th geometric difference of e^{k^m} is 1, m-th is constant";
    let mut v = vec![
        entry(
            "exp(k)",
            "exp(k)",
            Truth {
                spaces: |s, m| poly_spaces(1, s, m),
                alpha: never,
                alpha_alpha: always,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Paper,
                space_note: WITNESS,
                dual_note: "p-series oracle: Σ k^{m+1} diverges; k^{1-m} bounded",
            },
        ),
        entry(
            "exp(k^2)",
            "exp(k^2)",
            Truth {
                spaces: |s, m| poly_spaces(2, s, m),
                alpha: never,
                alpha_alpha: |m| m >= 2,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Paper,
                space_note: WITNESS,
                dual_note: "p-series oracle: k^{2-m} bounded iff m >= 2",
            },
        ),
        entry(
            "exp(k^3)",
            "exp(k^3)",
            Truth {
                spaces: |s, m| poly_spaces(3, s, m),
                alpha: never,
                alpha_alpha: |m| m >= 3,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Paper,
                space_note: WITNESS,
                dual_note: "p-series oracle: k^{3-m} bounded iff m >= 3",
            },
        ),
        entry(
            "exp(k^4)",
            "exp(k^4)",
            Truth {
                spaces: |s, m| poly_spaces(4, s, m),
                alpha: never,
                alpha_alpha: never,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Paper,
                space_note: WITNESS,
                dual_note: "p-series oracle: k^{4-m} unbounded for m <= 3",
            },
        ),
        entry(
            "constant 1",
            "1",
            Truth {
                spaces: null_everywhere,
                alpha: always,
                alpha_alpha: always,
                beta: true,
                gamma: true,
                tag: ProvenanceTag::Trivial,
                space_note: "every term is the geometric zero",
                dual_note: "every sum is the geometric zero",
            },
        ),
        entry(
            "constant e",
            "e",
            Truth {
                spaces: |s, m| m >= 1 || s != Space::C0,
                alpha: never,
                alpha_alpha: always,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Trivial,
                space_note: "constant sequence e; all differences vanish",
                dual_note: "Σ k^m diverges; k^{-m} bounded",
            },
        ),
        entry(
            "exp(1/k)",
            "exp(1/k)",
            Truth {
                spaces: null_everywhere,
                alpha: never,
                alpha_alpha: always,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Derived,
                space_note: "forward-difference oracle: Δ^m of 1/k is O(k^{-m-1})",
                dual_note: "p-series oracle: Σ k^{m-1} diverges; Σ_k 1 unbounded",
            },
        ),
        entry(
            "exp(1/k^2)",
            "exp(1/k^2)",
            Truth {
                spaces: null_everywhere,
                alpha: never,
                alpha_alpha: always,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Derived,
                space_note: "forward-difference oracle: Δ^m of 1/k^2 is O(k^{-m-2})",
                dual_note: "harmonic oracle: Σ k·k^{-2} diverges",
            },
        ),
        entry(
            "exp(1/k^4)",
            "exp(1/k^4)",
            Truth {
                spaces: null_everywhere,
                alpha: |m| m <= 2,
                alpha_alpha: always,
                beta: true,
                gamma: true,
                tag: ProvenanceTag::Derived,
                space_note: "forward-difference oracle: Δ^m of 1/k^4 is O(k^{-m-4})",
                dual_note: "p-series oracle: Σ k^{m-4} converges iff m <= 2; R_k ~ 1/(3k^3)",
            },
        ),
        entry(
            "exp(2^{-k})",
            "exp(2^(0-k))",
            Truth {
                spaces: null_everywhere,
                alpha: always,
                alpha_alpha: always,
                beta: true,
                gamma: true,
                tag: ProvenanceTag::Derived,
                space_note: "geometric-tail oracle: differences are O(2^{-k})",
                dual_note: "geometric-tail oracle: Σ k^m 2^{-k} converges; R_k = 2^{-k}",
            },
        ),
        entry(
            "exp(ln(k))",
            "exp(ln(k))",
            Truth {
                spaces: |_, m| m >= 1,
                alpha: never,
                alpha_alpha: always,
                beta: false,
                gamma: false,
                tag: ProvenanceTag::Derived,
                space_note: "forward-difference oracle: ln k unbounded, Δ^m ln k is O(k^{-m})",
                dual_note: "p-series oracle: Σ k^m ln k diverges; k^{-m} ln k bounded",
            },
        ),
    ];
    let logs: Vec<f64> = (1..=ALTERNATING_LEN)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / k as f64)
        .collect();
    let t = Truth {
        spaces: null_everywhere,
        alpha: never,
        alpha_alpha: always,
        beta: false,
        gamma: false,
        tag: ProvenanceTag::Derived,
        space_note: "forward-difference oracle: Δ^m of (-1)^k/k is O(1/k)",
        dual_note: "alternating oracle: Σ (-1)^k does not converge; |R_k| ~ 1/(2k) not summable",
    };
    v.push(CatalogEntry {
        name: "alternating exp((-1)^k/k)".into(),
        definition: Definition::Buffer {
            generator: "log x_k = (-1)^k / k".into(),
            len: ALTERNATING_LEN,
        },
        annotations: annotate(&t),
        seq: GSeq::from_logs(logs).expect("finite logs"),
    });
    v
}

/// The catalog, built once.
pub fn catalog_entries() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    catalog_entries().iter().find(|e| e.name == name)
}

pub fn to_json() -> Result<String> {
    serde_json::to_string_pretty(catalog_entries())
        .map_err(|e| crate::error::Error::InvalidArgument(e.to_string()))
}
