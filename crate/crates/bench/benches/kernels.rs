use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tnn_stable::grassmann::{check_plucker_relations, plucker_of_matrix};
use tnn_stable::matrix::MinorTable;
use tnn_stable::operators::{exp_delta, sharp_of_matrix, symbol};
use tnn_stable::stability::{
    elementary_symmetric, exact_stability_deg2, falsify_stability, rayleigh_difference,
};
use tnn_stable::tnn::{is_totally_nonnegative, random_rational_matrix};
use tnn_stable_bench::{balanced_gr24_poly, dense_rational, tnn_matrix};

fn bench_minors(c: &mut Criterion) {
    let a6 = dense_rational(6, 1);
    let a8 = dense_rational(8, 2);
    c.bench_function("minor_table_full_n6", |b| {
        b.iter(|| MinorTable::build(black_box(&a6), 6))
    });
    c.bench_function("bareiss_det_n8", |b| {
        b.iter(|| black_box(&a8).det().unwrap())
    });
    c.bench_function("compound_n6_k3", |b| {
        b.iter(|| black_box(&a6).compound(3).unwrap())
    });
}

fn bench_tnn(c: &mut Criterion) {
    let m = tnn_matrix(6, 18, 3);
    c.bench_function("tnn_certify_n6", |b| {
        b.iter(|| is_totally_nonnegative(black_box(&m)).unwrap())
    });
}

fn bench_grassmann(c: &mut Criterion) {
    let m = random_rational_matrix(6, 3, 6, 4, 4).unwrap();
    let p = plucker_of_matrix(&m).unwrap();
    c.bench_function("plucker_of_matrix_gr36", |b| {
        b.iter(|| plucker_of_matrix(black_box(&m)).unwrap())
    });
    c.bench_function("plucker_relations_gr36", |b| {
        b.iter(|| check_plucker_relations(black_box(&p)))
    });
}

fn bench_operators(c: &mut Criterion) {
    let a = tnn_matrix(6, 12, 5);
    c.bench_function("sharp_of_matrix_n6", |b| {
        b.iter(|| sharp_of_matrix(black_box(&a)).unwrap())
    });
    let op = sharp_of_matrix(&tnn_matrix(5, 10, 6)).unwrap();
    c.bench_function("symbol_n5", |b| b.iter(|| symbol(black_box(&op)).unwrap()));
    let z = random_rational_matrix(5, 5, 4, 4, 7).unwrap();
    c.bench_function("exp_delta_n5", |b| {
        b.iter(|| exp_delta(black_box(&z), 0.5, 1e-10).unwrap())
    });
}

fn bench_stability(c: &mut Criterion) {
    let f = balanced_gr24_poly();
    c.bench_function("rayleigh_difference", |b| {
        b.iter(|| rayleigh_difference(black_box(&f), 1, 3).unwrap())
    });
    c.bench_function("exact_deg2_gr24", |b| {
        b.iter(|| exact_stability_deg2(black_box(&f)).unwrap())
    });
    let e = elementary_symmetric(5, 2).unwrap();
    c.bench_function("falsifier_200_samples_stable", |b| {
        b.iter(|| falsify_stability(black_box(&e), 200, 9).unwrap())
    });
}

criterion_group!(
    benches,
    bench_minors,
    bench_tnn,
    bench_grassmann,
    bench_operators,
    bench_stability
);
criterion_main!(benches);
