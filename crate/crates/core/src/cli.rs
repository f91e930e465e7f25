//! Command-line front end. Every subcommand maps onto one library operation;
//! numbers are reported as logs (`log_value`) with an `e^{...}` rendering.
//!
//! Exit status: 0 for a definite result, 2 when any verdict is inconclusive,
//! 1 on evaluation errors (reported as JSON on stdout), 64 on usage errors.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::duals::{dual_test, DualKind, DualReport};
use crate::error::{Error, Result};
use crate::garith::GNum;
use crate::gdiff::{delta_binomial, delta_norm, DiffOrder};
use crate::gseq::GSeq;
use crate::spaces::{
    algebra_counterexample, classify, inclusion_demo, lemma_equivalence_check_tol, AlgebraReport,
    InclusionReport, LemmaReport, Membership, MembershipReport, Space,
};
use crate::verdict::{Verdict, VerdictKind, DEFAULT_N, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "geocalc",
    version,
    about = "Geometric calculus: differences, spaces and duals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Linf,
    C,
    C0,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Linf => Space::Linf,
            SpaceArg::C => Space::C,
            SpaceArg::C0 => Space::C0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualArg {
    Alpha,
    #[value(alias = "alpha_alpha", alias = "aa")]
    AlphaAlpha,
    Beta,
    Gamma,
}

impl From<DualArg> for DualKind {
    fn from(d: DualArg) -> DualKind {
        match d {
            DualArg::Alpha => DualKind::Alpha,
            DualArg::AlphaAlpha => DualKind::AlphaAlpha,
            DualArg::Beta => DualKind::Beta,
            DualArg::Gamma => DualKind::Gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoArg {
    Inclusion,
    Algebra,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Sequence: DSL expression in k, or path to a file of positive values, one per line
    #[arg(long)]
    pub seq: Option<String>,
    /// Interpret buffer file lines as logs instead of values
    #[arg(long)]
    pub logs: bool,
    /// Difference order
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Probe window
    #[arg(long = "N", default_value_t = DEFAULT_N)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Terms x_k over a k-range
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1..10")]
        range: String,
    },
    /// Terms of Δ^m_G x over a k-range
    Diff {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1..10")]
        range: String,
    },
    /// Δ-norm with the supremum over k <= N
    Norm {
        #[command(flatten)]
        common: Common,
    },
    /// Membership in linf, c or c0 of order m
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        space: SpaceArg,
    },
    /// Dual-space membership test
    Dual {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: DualArg,
    },
    /// First-difference boundedness lemma: (a) versus (b)(i) and (b)(ii)
    Lemma {
        #[command(flatten)]
        common: Common,
    },
    /// Inclusion or algebra counterexample demonstrations at order m
    Demo {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DemoArg::Inclusion)]
        which: DemoArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Eval,
    Diff,
    Norm,
    Classify,
    Dual,
    Lemma,
    Demo,
}

/// Validated command configuration.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: CommandKind,
    pub seq: Option<String>,
    pub logs: bool,
    pub m: u32,
    pub n: usize,
    pub tol: f64,
    pub format: Format,
    pub range: Option<(usize, usize)>,
    pub space: Option<Space>,
    pub kind: Option<DualKind>,
    pub which: Option<DemoArg>,
}

/// `a..b` (inclusive) or `a..=b`, with `1 <= a <= b`.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("bad range '{s}', expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

impl CliConfig {
    pub fn from_command(cmd: Command) -> Result<Self> {
        let (command, common, range, space, kind, which) = match cmd {
            Command::Eval { common, range } => {
                (CommandKind::Eval, common, Some(range), None, None, None)
            }
            Command::Diff { common, range } => {
                (CommandKind::Diff, common, Some(range), None, None, None)
            }
            Command::Norm { common } => (CommandKind::Norm, common, None, None, None, None),
            Command::Classify { common, space } => (
                CommandKind::Classify,
                common,
                None,
                Some(space.into()),
                None,
                None,
            ),
            Command::Dual { common, kind } => (
                CommandKind::Dual,
                common,
                None,
                None,
                Some(kind.into()),
                None,
            ),
            Command::Lemma { common } => (CommandKind::Lemma, common, None, None, None, None),
            Command::Demo { common, which } => {
                (CommandKind::Demo, common, None, None, None, Some(which))
            }
        };
        let cfg = CliConfig {
            command,
            seq: common.seq,
            logs: common.logs,
            m: common.m,
            n: common.n,
            tol: common.tol,
            format: common.format,
            range: range.as_deref().map(parse_range).transpose()?,
            space,
            kind,
            which,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::InvalidArgument(format!(
                "--N must be at least 4, got {}",
                self.n
            )));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        if self.command != CommandKind::Demo && self.seq.is_none() {
            return Err(Error::InvalidArgument("--seq is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub seq: Option<String>,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictOut {
    pub kind: VerdictKind,
    pub estimate_log: Option<f64>,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOut {
    #[serde(rename = "probe_N")]
    pub probe_n: f64,
    #[serde(rename = "probe_2N")]
    pub probe_2n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub k: usize,
    pub log_value: f64,
    pub rendering: String,
}

impl Row {
    fn new(k: usize, g: GNum) -> Self {
        Row {
            k,
            log_value: g.log_value(),
            rendering: g.render(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueOut {
    pub log_value: f64,
    pub rendering: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "report", rename_all = "snake_case")]
pub enum Detail {
    Membership(MembershipReport),
    Dual(DualReport),
    Lemma(LemmaReport),
    Inclusion(InclusionReport),
    Algebra(AlgebraReport),
}

/// One JSON document per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliReport {
    pub command: CommandKind,
    pub inputs: Inputs,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<VerdictOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<DiagnosticsOut>,
    #[serde(default)]
    pub witness_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub membership: Option<Membership>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rows: Option<Vec<Row>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<ValueOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<Detail>,
}

impl CliReport {
    fn new(cfg: &CliConfig) -> Self {
        CliReport {
            command: cfg.command,
            inputs: Inputs {
                seq: cfg.seq.clone(),
                m: cfg.m,
                n: cfg.n,
                tol: cfg.tol,
            },
            verdict: None,
            diagnostics: None,
            witness_index: None,
            membership: None,
            rows: None,
            value: None,
            passed: None,
            detail: None,
        }
    }

    fn with_verdict(mut self, v: &Verdict) -> Self {
        self.verdict = Some(VerdictOut {
            kind: v.kind(),
            estimate_log: v.estimate().map(GNum::log_value),
            window: v.window(),
        });
        self.diagnostics = Some(DiagnosticsOut {
            probe_n: v.diagnostics().probe_n,
            probe_2n: v.diagnostics().probe_2n,
        });
        self
    }

    /// Exit status implied by the report.
    pub fn exit_code(&self) -> i32 {
        let inconclusive = self.membership == Some(Membership::Inconclusive)
            || self
                .verdict
                .as_ref()
                .is_some_and(|v| v.kind == VerdictKind::Inconclusive)
            || match &self.detail {
                Some(Detail::Lemma(l)) => l.any_inconclusive(),
                Some(Detail::Inclusion(r)) => r
                    .chain_lower
                    .iter()
                    .chain(&r.chain_upper)
                    .any(|m| m.membership() == Membership::Inconclusive),
                Some(Detail::Algebra(r)) => [&r.x, &r.y, &r.product]
                    .iter()
                    .any(|m| m.membership() == Membership::Inconclusive),
                _ => false,
            };
        if inconclusive {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(rows) = &self.rows {
            out.push_str("k,log_value,rendering\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{}", r.k, r.log_value, r.rendering);
            }
            return out;
        }
        if let Some(v) = &self.value {
            out.push_str("log_value,rendering\n");
            let _ = writeln!(out, "{},{}", v.log_value, v.rendering);
            return out;
        }
        out.push_str(
            "command,kind,estimate_log,window,probe_N,probe_2N,witness_index,membership\n",
        );
        let opt = |v: Option<String>| v.unwrap_or_default();
        let verdict = self.verdict.as_ref();
        let diag = self.diagnostics.as_ref();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            serde_plain(&self.command),
            opt(verdict.map(|v| serde_plain(&v.kind))),
            opt(verdict.and_then(|v| v.estimate_log).map(|e| e.to_string())),
            opt(verdict.map(|v| v.window.to_string())),
            opt(diag.map(|d| d.probe_n.to_string())),
            opt(diag.map(|d| d.probe_2n.to_string())),
            opt(self.witness_index.map(|w| w.to_string())),
            opt(self.membership.map(|m| serde_plain(&m))),
        );
        out
    }
}

fn serde_plain<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Sequence from `--seq`: an existing file is read as a buffer, anything else is DSL.
pub fn load_seq(source: &str, logs: bool) -> Result<GSeq> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {source}: {e}")))?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::InvalidArgument(format!("{source}:{}: not a number: '{line}'", i + 1))
            })?;
            values.push(v);
        }
        return if logs {
            GSeq::from_logs(values)
        } else {
            GSeq::from_values(&values)
        };
    }
    GSeq::parse(source)
}

fn rows(x: &GSeq, (a, b): (usize, usize)) -> Result<Vec<Row>> {
    (a..=b).map(|k| Ok(Row::new(k, x.term(k)?))).collect()
}

/// Executes a validated configuration.
pub fn execute(cfg: &CliConfig) -> Result<CliReport> {
    let report = CliReport::new(cfg);
    let m = DiffOrder(cfg.m);
    let seq = || -> Result<GSeq> {
        let s = cfg
            .seq
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--seq is required".into()))?;
        load_seq(s, cfg.logs)
    };
    let range = cfg.range.unwrap_or((1, 10));
    Ok(match cfg.command {
        CommandKind::Eval => CliReport {
            rows: Some(rows(&seq()?, range)?),
            ..report
        },
        CommandKind::Diff => CliReport {
            rows: Some(rows(&delta_binomial(&seq()?, m)?, range)?),
            ..report
        },
        CommandKind::Norm => {
            let g = delta_norm(&seq()?, m, cfg.n)?;
            CliReport {
                value: Some(ValueOut {
                    log_value: g.log_value(),
                    rendering: g.render(),
                }),
                ..report
            }
        }
        CommandKind::Classify => {
            let space = cfg
                .space
                .ok_or_else(|| Error::InvalidArgument("--space is required".into()))?;
            let r = classify(&seq()?, space, m, cfg.n, cfg.tol)?;
            let mut out = report.with_verdict(&r.verdict);
            out.witness_index = r.witness_index;
            out.membership = Some(r.membership());
            out.detail = Some(Detail::Membership(r));
            out
        }
        CommandKind::Dual => {
            let kind = cfg
                .kind
                .ok_or_else(|| Error::InvalidArgument("--kind is required".into()))?;
            let r = dual_test(&seq()?, kind, m, cfg.n, cfg.tol)?;
            let mut out = report.with_verdict(&r.verdict);
            out.membership = Some(r.membership());
            out.detail = Some(Detail::Dual(r));
            out
        }
        CommandKind::Lemma => {
            let r = lemma_equivalence_check_tol(&seq()?, cfg.n, cfg.tol)?;
            let mut out = report.with_verdict(&r.a);
            out.passed = Some(r.agree);
            out.detail = Some(Detail::Lemma(r));
            out
        }
        CommandKind::Demo => match cfg.which.unwrap_or(DemoArg::Inclusion) {
            DemoArg::Inclusion => {
                let r = inclusion_demo(m, cfg.n)?;
                CliReport {
                    passed: Some(r.passed),
                    detail: Some(Detail::Inclusion(r)),
                    ..report
                }
            }
            DemoArg::Algebra => {
                let r = algebra_counterexample(m, cfg.n)?;
                CliReport {
                    passed: Some(r.passed),
                    detail: Some(Detail::Algebra(r)),
                    ..report
                }
            }
        },
    })
}

#[derive(Debug, Serialize)]
struct ErrorOut<'a> {
    command: CommandKind,
    error: ErrorBody<'a>,
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'a [String]>,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonPositiveValue(_) => "non_positive_value",
        Error::NonFiniteLog(_) => "non_finite_log",
        Error::GeometricZeroDivisor => "geometric_zero_divisor",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::Domain(_) => "domain_error",
        Error::Overflow(_) => "overflow",
        Error::Parse(_) => "parse_error",
        Error::Unsupported(_) => "unsupported",
        Error::NoSubsequenceFound { .. } => "no_subsequence_found",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

/// Structured JSON for an evaluation error.
pub fn error_json(command: CommandKind, e: &Error) -> String {
    let (offset, expected) = match e {
        Error::Parse(p) => (Some(p.offset), Some(p.expected.as_slice())),
        _ => (None, None),
    };
    let body = ErrorOut {
        command,
        error: ErrorBody {
            kind: error_kind(e),
            message: e.to_string(),
            offset,
            expected,
        },
    };
    serde_json::to_string_pretty(&body).unwrap_or_else(|_| e.to_string())
}

/// Result of one invocation: exit status plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs a validated configuration and renders its output.
pub fn run(cfg: &CliConfig) -> Outcome {
    match execute(cfg) {
        Ok(report) => {
            let stdout = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&report)
                    .map(|s| s + "\n")
                    .unwrap_or_default(),
                Format::Csv => report.to_csv(),
            };
            Outcome {
                code: report.exit_code(),
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: EXIT_ERROR,
            stdout: error_json(cfg.command, &e) + "\n",
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Parses arguments and runs; the usage-error path yields exit 64.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match CliConfig::from_command(cli.command) {
        Ok(cfg) => run(&cfg),
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("usage error: {e}\n"),
        },
    }
}
