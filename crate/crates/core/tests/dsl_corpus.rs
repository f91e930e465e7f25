//! DSL printing round trip and exp-form log accuracy.

use geocalc::exprdsl::{eval_at, parse};

const CORPUS: [&str; 50] = [
    "k",
    "e",
    "1",
    "2.5",
    "1e3",
    "0.25e-2",
    "k+1",
    "k-1",
    "k*k",
    "k/2",
    "k^2",
    "2^k",
    "exp(k)",
    "exp(k^2)",
    "exp(k^3)",
    "exp(k^4)",
    "exp(1/k)",
    "exp(1/k^2)",
    "exp(1/(k^4))",
    "exp(2^(0-k))",
    "exp(ln(k))",
    "ln(k)",
    "ln(k+1)",
    "exp(ln(k)/k)",
    "k^2^3",
    "(k^2)^3",
    "k-(1-k)",
    "(k-1)-k",
    "k/(2/k)",
    "(k/2)/k",
    "k*(k+1)",
    "(k+1)*(k+2)*(k+3)",
    "1+k*2",
    "(1+k)*2",
    "k^(1/2)",
    "e^k",
    "exp(k)*exp(1/k)",
    "exp(k-ln(k))",
    "exp(0-k)",
    "exp((k+1)^2-k^2)",
    "2*exp(k)",
    "exp(k)/k",
    "ln(exp(k))",
    "exp(exp(1/k))",
    "k^k",
    "(k^k)^(1/k)",
    "1/(1+1/k)",
    "exp(k/(k+1))",
    "3.0*k^2+2*k+1",
    "exp(k^2/7+k)",
];

#[test]
fn pretty_print_is_a_fixed_point() {
    for src in CORPUS {
        let once = parse(src).unwrap().to_string();
        let ast = parse(&once).unwrap_or_else(|e| panic!("{src} -> {once}: {e:?}"));
        assert_eq!(ast, parse(src).unwrap(), "{src} changed meaning");
        assert_eq!(ast.to_string(), once, "{src}");
    }
}

#[test]
fn exp_forms_evaluate_in_the_log_domain() {
    type Direct = fn(f64) -> f64;
    let cases: [(&str, Direct); 8] = [
        ("exp(k)", |k| k),
        ("exp(k^2)", |k| k * k),
        ("exp(k^4)", |k| k.powi(4)),
        ("exp(1/k)", |k| 1.0 / k),
        ("exp(1/(k^4))", |k| 1.0 / k.powi(4)),
        ("exp(2^(0-k))", |k| 2f64.powf(-k)),
        ("exp(ln(k))", |k| k.ln()),
        ("exp(k^2/7+k)", |k| k * k / 7.0 + k),
    ];
    for (src, f) in cases {
        let ast = parse(src).unwrap();
        for k in [1u64, 2, 3, 10, 999, 10_000, 1_000_000] {
            let got = eval_at(&ast, k).unwrap().log_value();
            let want = f(k as f64);
            assert!(
                (got - want).abs() <= 1e-14 * want.abs(),
                "{src} at k={k}: {got} vs {want}"
            );
        }
    }
}
