use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use gcl_core::cyclotomic::smoothed_bn_trace;
use gcl_core::forms::FormFamily;
use gcl_core::gamma::{g_r, geometric_g_cone, Truncation};
use gcl_core::rat::{ratio, Int, Rat};
use gcl_core::smoothing::smoothed_bn_dedekind;

fn fam(n: usize, forms: &[&[i64]]) -> FormFamily {
    FormFamily::new(
        n,
        forms
            .iter()
            .map(|f| f.iter().map(|&e| Int::from(e)).collect())
            .collect(),
    )
    .unwrap()
}

fn bench_smoothed_formulas(c: &mut Criterion) {
    let f3 = fam(3, &[&[1, 1, 2], &[2, 3, 2], &[1, -1, -1]]);
    let v: Vec<Rat> = vec![ratio(1, 3), ratio(1, 2), ratio(0, 1)];
    let mut group = c.benchmark_group("smoothed_bn");
    group.bench_function("dedekind_n3_N3", |b| {
        b.iter(|| smoothed_bn_dedekind(black_box(&f3), black_box(&v), 3).unwrap())
    });
    group.bench_function("trace_n3_N3", |b| {
        b.iter(|| smoothed_bn_trace(black_box(&f3), black_box(&v), 3).unwrap())
    });
    group.finish();
}

fn bench_gamma(c: &mut Criterion) {
    let trunc = Truncation::default();
    let z = Complex64::new(0.3, 0.2);
    let taus = [Complex64::new(0.1, 0.8), Complex64::new(-0.2, 1.1)];
    let mut group = c.benchmark_group("gamma");
    group.bench_function("g_1_elliptic_gamma", |b| {
        b.iter(|| g_r(black_box(z), black_box(&taus), &trunc).unwrap())
    });
    let f = fam(3, &[&[2, -1, 0], &[0, 0, 1]]);
    let v: Vec<Rat> = vec![ratio(0, 1), ratio(0, 1), ratio(0, 1)];
    let w = Complex64::new(-1.6, 1.6);
    let x = [
        Complex64::new(-1.6, 1.6),
        Complex64::new(0.3, -0.8),
        Complex64::new(0.15, 0.7),
    ];
    group.bench_function("geometric_g_cone_n3", |b| {
        b.iter(|| geometric_g_cone(black_box(&f), black_box(&v), w, black_box(&x), &trunc).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_smoothed_formulas, bench_gamma);
criterion_main!(benches);
