use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geocalc::catalog::find;
use geocalc::gdiff::{delta_binomial, DiffOrder};
use geocalc::window::log_window_seq;

fn windows(c: &mut Criterion) {
    let base = find("exp(k^3)").expect("catalog entry").seq().clone();
    let mut group = c.benchmark_group("log_window");
    group.sample_size(20);
    for m in [0u32, 4] {
        let x = delta_binomial(&base, DiffOrder(m)).unwrap();
        for n in [10_000usize, 200_000] {
            let id = format!("m{m}/n{n}");
            group.bench_with_input(BenchmarkId::new("sequential", &id), &n, |b, &n| {
                b.iter(|| log_window_seq(black_box(&x), n).unwrap())
            });
            #[cfg(feature = "parallel")]
            group.bench_with_input(BenchmarkId::new("parallel", &id), &n, |b, &n| {
                b.iter(|| geocalc::window::log_window_par(black_box(&x), n).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, windows);
criterion_main!(benches);
