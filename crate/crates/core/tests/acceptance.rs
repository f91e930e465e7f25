//! Acceptance suite. Each criterion prints one `criterion N: PASS|FAIL` line
//! and then asserts; run with `--nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use geocalc::catalog::{catalog_entries, Target};
use geocalc::cli::CliReport;
use geocalc::duals::{dual_test, DualKind};
use geocalc::gdiff::{d_operator, delta_binomial, delta_norm, delta_recursive, DiffOrder};
use geocalc::gseq::{sup_gabs, GSeq};
use geocalc::spaces::{
    algebra_counterexample, inclusion_demo, lemma_equivalence_check, Membership,
};
use geocalc::GNum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;
const TOL: f64 = 1e-6;

fn report(id: u32, started: Instant, failures: &[String], budget: Option<Duration>) {
    let elapsed = started.elapsed();
    let over = budget.is_some_and(|b| elapsed > b);
    let ok = failures.is_empty() && !over;
    println!(
        "criterion {id}: {} ({} failures, {:.2?}{})",
        if ok { "PASS" } else { "FAIL" },
        failures.len(),
        elapsed,
        budget
            .map(|b| format!(", budget {b:?}"))
            .unwrap_or_default()
    );
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    assert!(
        failures.is_empty(),
        "criterion {id}: {} failures",
        failures.len()
    );
    assert!(!over, "criterion {id}: {elapsed:?} over budget");
}

fn random_logs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-5.0..=5.0)).collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn criterion_1_operator_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    for s in 0..200 {
        let x = GSeq::from_logs(random_logs(&mut rng, 1000 + 6)).unwrap();
        for m in 0..=6 {
            let rec = delta_recursive(&x, DiffOrder(m)).unwrap();
            let bin = delta_binomial(&x, DiffOrder(m)).unwrap();
            for k in 1..=1000 {
                let (a, b) = (rec.log_term(k).unwrap(), bin.log_term(k).unwrap());
                if !rel_close(a, b, 1e-9) {
                    failures.push(format!("seq {s} m={m} k={k}: {a} vs {b}"));
                }
            }
        }
    }
    report(1, started, &failures, Some(Duration::from_secs(10)));
}

/// Classical forward difference `u_k - u_{k+1}` applied `order` times to `k^p`, exactly.
fn power_difference_oracle(p: u32, order: u32, k: i128) -> i128 {
    if order == 0 {
        return k.pow(p);
    }
    power_difference_oracle(p, order - 1, k) - power_difference_oracle(p, order - 1, k + 1)
}

#[test]
fn criterion_2_witness_identities() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for m in 1..=4u32 {
        let x = GSeq::parse(&format!("exp(k^{m})")).unwrap();
        let top = delta_binomial(&x, DiffOrder(m + 1)).unwrap();
        let dm = delta_binomial(&x, DiffOrder(m)).unwrap();
        let factorial: i128 = (1..=m as i128).product();
        let closed = if m % 2 == 0 { factorial } else { -factorial };
        for k in 1..=10_000usize {
            let r = top.log_term(k).unwrap();
            if r.abs() >= 1e-9 {
                failures.push(format!("m={m} k={k}: log Δ^(m+1) = {r}"));
            }
            let oracle = power_difference_oracle(m, m, k as i128);
            if oracle != closed {
                failures.push(format!(
                    "m={m} k={k}: oracle {oracle} vs (-1)^m m! = {closed}"
                ));
            }
            let got = dm.log_term(k).unwrap();
            if (got - oracle as f64).abs() >= 1e-9 {
                failures.push(format!("m={m} k={k}: log Δ^m = {got}, oracle {oracle}"));
            }
        }
    }
    report(2, started, &failures, None);
}

#[test]
fn criterion_3_arithmetic_axioms() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let tol = 1e-12;
    let e = GNum::ONE;
    for i in 0..10_000 {
        let [u, v] = [0; 2].map(|_| rng.random_range(-5.0..=5.0));
        let x = GNum::from_log(u).unwrap();
        let y = GNum::from_log(v).unwrap();
        let lhs = x.gadd(y).gabs().log_value();
        let rhs = x.gabs().gadd(y.gabs()).log_value();
        if lhs > rhs + tol {
            failures.push(format!("#{i} triangle: {lhs} > {rhs}"));
        }
        if !rel_close(x.gsub(y).log_value(), y.gsub(x).gneg().log_value(), tol) {
            failures.push(format!("#{i} antisymmetry"));
        }
        if !rel_close(
            x.gmul(y).gabs().log_value(),
            x.gabs().gmul(y.gabs()).log_value(),
            tol,
        ) {
            failures.push(format!("#{i} |x⊙y| multiplicativity"));
        }
        if !rel_close(x.gmul(e).log_value(), u, tol) {
            failures.push(format!("#{i} x⊙e identity"));
        }
        if !x.is_geometric_zero() {
            let inv = x.ginv().unwrap();
            if !rel_close(x.gmul(inv).log_value(), 1.0, tol) {
                failures.push(format!("#{i} x⊙ginv(x)"));
            }
        }
    }
    report(3, started, &failures, None);
}

#[test]
fn criterion_4_homomorphism() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for p in 0..100 {
        let x = GSeq::from_logs(random_logs(&mut rng, 505)).unwrap();
        let y = GSeq::from_logs(random_logs(&mut rng, 505)).unwrap();
        let alpha = GNum::from_log(rng.random_range(-5.0..=5.0)).unwrap();
        for m in 0..=4 {
            let d = |s: &GSeq| delta_binomial(s, DiffOrder(m)).unwrap();
            let (dx, dy) = (d(&x), d(&y));
            let sum = d(&x.gadd_termwise(&y));
            let scaled = d(&x.gscale(alpha));
            for k in 1..=500 {
                let a = sum.log_term(k).unwrap();
                let b = dx.log_term(k).unwrap() + dy.log_term(k).unwrap();
                if !rel_close(a, b, 1e-10) {
                    failures.push(format!("pair {p} m={m} k={k}: additivity {a} vs {b}"));
                }
                let a = scaled.log_term(k).unwrap();
                let b = alpha.gmul(dx.term(k).unwrap()).log_value();
                if !rel_close(a, b, 1e-10) {
                    failures.push(format!("pair {p} m={m} k={k}: homogeneity {a} vs {b}"));
                }
            }
        }
    }
    report(4, started, &failures, None);
}

#[test]
fn criterion_5_lemma_on_catalog() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for entry in catalog_entries() {
        let r = lemma_equivalence_check(entry.seq(), N).unwrap();
        if r.any_inconclusive() || !r.agree {
            failures.push(format!(
                "{}: a={:?} b_i={:?} b_ii={:?}",
                entry.name,
                r.a.kind(),
                r.b_i.kind(),
                r.b_ii.kind()
            ));
        }
    }
    report(5, started, &failures, None);
}

#[test]
fn criterion_6_dual_classifiers() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for entry in catalog_entries() {
        let mut at_m1 = [None; 3];
        for ann in &entry.annotations {
            let Target::Dual(kind) = ann.target else {
                continue;
            };
            let r = dual_test(entry.seq(), kind, ann.m, N, TOL).unwrap();
            checked += 1;
            let got = r.membership();
            if got == Membership::Inconclusive || got.is_member() != ann.expected {
                failures.push(format!(
                    "{} {kind} m={}: got {got:?}, expected member={}",
                    entry.name, ann.m, ann.expected
                ));
            }
            if ann.m.0 == 1 {
                let slot = match kind {
                    DualKind::Alpha => 0,
                    DualKind::Beta => 1,
                    DualKind::Gamma => 2,
                    DualKind::AlphaAlpha => continue,
                };
                at_m1[slot] = Some(got.is_member());
            }
        }
        if let [Some(a), Some(b), Some(g)] = at_m1 {
            if (a && !b) || (b && !g) {
                failures.push(format!("{}: containment α={a} β={b} γ={g}", entry.name));
            }
        } else {
            failures.push(format!("{}: missing α/β/γ annotations at m=1", entry.name));
        }
    }
    if checked == 0 {
        failures.push("no dual annotations in catalog".into());
    }
    report(6, started, &failures, Some(Duration::from_secs(30)));
}

#[test]
fn criterion_7_inclusion_demos() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for m in 1..=4 {
        if !inclusion_demo(DiffOrder(m), N).unwrap().passed {
            failures.push(format!("inclusion_demo m={m}"));
        }
    }
    for m in 2..=3 {
        if !algebra_counterexample(DiffOrder(m), N).unwrap().passed {
            failures.push(format!("algebra_counterexample m={m}"));
        }
    }
    report(7, started, &failures, None);
}

#[test]
fn criterion_8_norm_collapse() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let n = 1000;
    for s in 0..50 {
        let x = GSeq::from_logs(random_logs(&mut rng, n + 4)).unwrap();
        for m in 0..=4 {
            let m = DiffOrder(m);
            let d = d_operator(&x, m);
            let norm = delta_norm(&d, m, n).unwrap().log_value();
            let sup = sup_gabs(&delta_binomial(&d, m).unwrap(), n)
                .unwrap()
                .log_value();
            if !rel_close(norm, sup, 1e-12) {
                failures.push(format!("seq {s} m={m}: {norm} vs {sup}"));
            }
        }
    }
    report(8, started, &failures, None);
}

fn geocalc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_geocalc"))
        .args(args)
        .output()
        .expect("spawn geocalc");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn criterion_9_cli_end_to_end() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let (code, out) = geocalc(&["diff", "--seq", "exp(k^2)", "--m", "2", "--range", "1..5"]);
    let r: CliReport = serde_json::from_str(&out).unwrap();
    let rows = r.rows.clone().unwrap_or_default();
    if code != 0 || rows.len() != 5 || rows.iter().any(|r| r.log_value != 2.0) {
        failures.push(format!("diff: exit {code}, rows {rows:?}"));
    }

    let (code, out) = geocalc(&[
        "classify", "--seq", "exp(k)", "--space", "c0", "--m", "2", "--N", "100000",
    ]);
    let r: CliReport = serde_json::from_str(&out).unwrap();
    if code != 0 || r.membership != Some(Membership::Member) {
        failures.push(format!("classify: exit {code}, {:?}", r.membership));
    }

    let (code, out) = geocalc(&[
        "dual",
        "--kind",
        "alpha",
        "--m",
        "2",
        "--seq",
        "exp(1/(k^4))",
    ]);
    let r: CliReport = serde_json::from_str(&out).unwrap();
    if code != 0 || r.membership != Some(Membership::Member) {
        failures.push(format!("dual: exit {code}, {:?}", r.membership));
    }

    // every report shape parses back and reserializes identically
    let cases: &[&[&str]] = &[
        &["eval", "--seq", "exp(1/k)", "--range", "1..4"],
        &["norm", "--seq", "exp(k^2)", "--m", "2", "--N", "1000"],
        &[
            "classify", "--seq", "exp(k^3)", "--space", "linf", "--m", "2", "--N", "1000",
        ],
        &[
            "dual",
            "--kind",
            "beta",
            "--m",
            "1",
            "--seq",
            "exp(1/(k^4))",
            "--N",
            "1000",
        ],
        &["lemma", "--seq", "exp(ln(k))", "--N", "1000"],
        &["demo", "--which", "inclusion", "--m", "1", "--N", "1000"],
        &["demo", "--which", "algebra", "--m", "2", "--N", "1000"],
    ];
    for args in cases {
        let (_, out) = geocalc(args);
        let parsed: CliReport = match serde_json::from_str(&out) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("{args:?}: {e}"));
                continue;
            }
        };
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        let reparsed: CliReport = serde_json::from_str(&again).unwrap();
        if again != out || reparsed != parsed {
            failures.push(format!("{args:?}: round trip changed the report"));
        }
    }

    let (code, _) = geocalc(&["classify", "--seq", "exp(k)"]);
    if code != 64 {
        failures.push(format!("usage error exit {code}"));
    }
    report(9, started, &failures, None);
}
