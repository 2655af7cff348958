use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use berezin_bench::{octagon_table, weight};
use berezin_core::fuchsian::{enumerate_orbit, octagon_group, DEFAULT_DEDUP_TOL};
use berezin_core::quadrature::build_disk_rule;
use berezin_core::quantization::{poincare_series, EvalVector, Symbol};
use berezin_core::{d_kernel, DiskPoint};

fn kernels(c: &mut Criterion) {
    let (z, w) = (Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.6));
    c.bench_function("d_kernel", |b| {
        b.iter(|| d_kernel(black_box(z), black_box(w)))
    });

    c.bench_function("enumerate_orbit_depth4", |b| {
        b.iter(|| enumerate_orbit(&octagon_group(), black_box(4), DEFAULT_DEDUP_TOL).unwrap())
    });

    let table = octagon_table(5);
    let r8 = weight(8.0);
    c.bench_function("poincare_series_depth5", |b| {
        b.iter(|| poincare_series(&table, black_box(z), black_box(w), r8).unwrap())
    });

    let e = EvalVector::new(
        &table,
        r8,
        DiskPoint::ORIGIN,
        DiskPoint::from_re_im(0.2, 0.0).unwrap(),
    )
    .unwrap();
    c.bench_function("eval_vector_symbol_depth5", |b| {
        b.iter(|| e.eval(black_box(z), black_box(w)))
    });

    c.bench_function("disk_rule_48x96", |b| {
        b.iter(|| build_disk_rule(black_box(8.0), 48, 96, 0.0).unwrap())
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
