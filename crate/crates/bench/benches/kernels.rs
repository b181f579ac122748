use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zenoctl_bench::{example_a_fixture, lindblad_fixture, pauli_pairs};
use zenoctl_core::dissipation;
use zenoctl_core::lie;
use zenoctl_core::models;
use zenoctl_core::zeno;

fn pauli_products(c: &mut Criterion) {
    let pairs = pauli_pairs(40, 1024).unwrap();
    c.bench_function("pauli mul x1024 (40 qubits)", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.mul(y).unwrap());
            }
        })
    });
}

fn closures(c: &mut Criterion) {
    let mut group = c.benchmark_group("zeno closure example A");
    group.sample_size(10);
    for n in [3, 4] {
        let m = models::example_a(n).unwrap();
        let hs = m.compressed_hamiltonians().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &hs, |b, hs| {
            b.iter(|| lie::closure_of_hamiltonians(black_box(hs), lie::DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn zeno_products(c: &mut Criterion) {
    let (h, p) = example_a_fixture(4).unwrap();
    c.bench_function("zeno_product m=256 (example A, n=4)", |b| {
        b.iter(|| zeno::zeno_product(black_box(&h), &p, 1.0, 256).unwrap())
    });
}

fn lindblad(c: &mut Criterion) {
    let (model, rho0) = lindblad_fixture(50.0).unwrap();
    let mut group = c.benchmark_group("lindblad");
    group.sample_size(10);
    group.bench_function("rk4 2500 steps (3 qubits)", |b| {
        b.iter(|| dissipation::evolve_lindblad(&model, black_box(&rho0), 1.0, 2500).unwrap())
    });
    group.finish();
}

criterion_group!(benches, pauli_products, closures, zeno_products, lindblad);
criterion_main!(benches);
