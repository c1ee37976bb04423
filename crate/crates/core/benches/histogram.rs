//! Sequential vs parallel enumeration benchmarks. Both modes produce
//! bit-identical histograms; this suite measures the spread.
//!
//! Run with `cargo bench -p igusa-core`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use igusa_core::arith::{parse_polynomial, PadicLevel, ResidueBox};
use igusa_core::engine::{
    build_histogram_with, contact_zero_counts, Budget, ExecMode,
};

fn modes() -> Vec<(&'static str, ExecMode)> {
    let mut v = vec![("sequential", ExecMode::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", ExecMode::Parallel));
    v
}

fn bench_histogram(c: &mut Criterion) {
    let cases = [
        ("cubic_univariate_97^3", "x^3 - 3*x", 1usize, 97u64, 3u32),
        ("cusp_bivariate_31^2", "x^2 + y^3", 2, 31, 2),
    ];
    let mut group = c.benchmark_group("histogram_full_box");
    group.sample_size(10);
    for (name, text, n, p, m) in cases {
        let f = parse_polynomial(text, n).unwrap();
        let level = PadicLevel::new(p, m).unwrap();
        for (mode_name, mode) in modes() {
            group.bench_with_input(BenchmarkId::new(name, mode_name), &mode, |b, &mode| {
                b.iter(|| {
                    build_histogram_with(&f, &level, &ResidueBox::Full, Budget::default(), mode)
                        .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bench_contact_tree(c: &mut Criterion) {
    let f = parse_polynomial("x^2 + y^3", 2).unwrap();
    let mut group = c.benchmark_group("contact_tree_cusp_17^6");
    group.sample_size(10);
    for (mode_name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(mode_name), &mode, |b, &mode| {
            b.iter(|| {
                contact_zero_counts(&f, 17, 6, &ResidueBox::origin(2), Budget::default(), mode)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_histogram, bench_contact_tree);
criterion_main!(benches);
