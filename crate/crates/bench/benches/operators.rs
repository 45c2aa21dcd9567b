use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use racah_bench::sample_params;
use racah_core::algebra::{verify_commutation, verify_spectrum};
use racah_core::orthogonality::{connection_matrix, verify_orthogonality_exact};
use racah_core::polynomials::racah_grid_vector;
use racah_core::{build_racah_operator, GeneratorTable, MultiIndexK, SimplexGrid};

fn realization(c: &mut Criterion) {
    let mut group = c.benchmark_group("realize L_j");
    for (n, big_n) in [(4, 4), (4, 8), (5, 5)] {
        let params = sample_params(n, big_n);
        let grid = SimplexGrid::new(params.clone());
        let op = build_racah_operator(n - 2, 0, &params).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("n={n} N={big_n}")), &op, |b, op| {
            b.iter(|| black_box(op.realize(&grid).unwrap()))
        });
    }
    group.finish();
}

fn symbolic_composition(c: &mut Criterion) {
    let params = sample_params(5, 3);
    let l1 = build_racah_operator(1, 0, &params).unwrap();
    let l3 = build_racah_operator(3, 0, &params).unwrap();
    c.bench_function("compose L_1 L_3, n=5", |b| b.iter(|| black_box(l1.compose(&l3).unwrap())));
}

fn generators(c: &mut Criterion) {
    let mut group = c.benchmark_group("generator table");
    group.sample_size(10);
    for (n, big_n) in [(3, 10), (4, 5)] {
        let params = sample_params(n, big_n);
        group.bench_function(format!("build n={n} N={big_n}"), |b| {
            b.iter(|| black_box(GeneratorTable::new(params.clone()).unwrap()))
        });
        let table = GeneratorTable::new(params).unwrap();
        group.bench_function(format!("commutation n={n} N={big_n}"), |b| {
            b.iter(|| black_box(verify_commutation(&table).unwrap()))
        });
    }
    let table = GeneratorTable::new(sample_params(4, 4)).unwrap();
    group.bench_function("spectrum C[2..4] n=4 N=4", |b| {
        b.iter(|| black_box(verify_spectrum(2, 4, &table).unwrap()))
    });
    group.finish();
}

fn polynomials(c: &mut Criterion) {
    let params = sample_params(5, 6);
    let grid = SimplexGrid::new(params);
    let k = MultiIndexK::new(vec![2, 1, 2], 6).unwrap();
    c.bench_function("racah grid vector n=5 N=6", |b| {
        b.iter(|| black_box(racah_grid_vector(&k, &grid).unwrap()))
    });
}

fn orthogonality(c: &mut Criterion) {
    let mut group = c.benchmark_group("orthogonality");
    group.sample_size(10);
    let params = sample_params(4, 4);
    group.bench_function("exact gram n=4 N=4", |b| {
        b.iter(|| black_box(verify_orthogonality_exact(&params).unwrap()))
    });
    group.bench_function("connection matrix n=4 N=4", |b| {
        b.iter(|| black_box(connection_matrix(&params).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, realization, symbolic_composition, generators, polynomials, orthogonality);
criterion_main!(benches);
