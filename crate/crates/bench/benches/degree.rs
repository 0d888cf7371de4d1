use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gptcompat::compat::{construct_incompatible_pair, degree, degree_free_coin};
use gptcompat::{shapes, Polytope, DEFAULT_TOL};
use gptcompat_bench::{crosspolytope, ngon, random, Instance};

fn bench_degree(c: &mut Criterion) {
    let mut group = c.benchmark_group("degree");
    let instances: Vec<Instance> = vec![
        ngon(8),
        ngon(32),
        ngon(128),
        crosspolytope(3),
        crosspolytope(4),
        random(4, 20, 1),
    ];
    for inst in &instances {
        group.bench_with_input(BenchmarkId::new("fair", &inst.name), inst, |b, i| {
            b.iter(|| degree(black_box(&i.m1), black_box(&i.m2), &i.k).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("free_coin", &inst.name), inst, |b, i| {
            b.iter(|| degree_free_coin(black_box(&i.m1), black_box(&i.m2), &i.k).unwrap())
        });
    }
    group.finish();
}

fn bench_facets(c: &mut Criterion) {
    let mut group = c.benchmark_group("facets");
    for (name, pts) in [
        ("hypercube:4", shapes::hypercube(4, DEFAULT_TOL).unwrap()),
        (
            "random:3:30",
            shapes::random(3, 30, 7, DEFAULT_TOL).unwrap(),
        ),
    ] {
        let coords: Vec<Vec<f64>> = pts.vertices().iter().map(|p| p.coords().to_vec()).collect();
        group.bench_function(name, |b| {
            b.iter(|| {
                let k = Polytope::from_coords(black_box(&coords), DEFAULT_TOL).unwrap();
                k.facets().unwrap().len()
            })
        });
    }
    group.finish();
}

fn bench_witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("witness");
    group.sample_size(10);
    for inst in [ngon(12), crosspolytope(3)] {
        group.bench_function(&inst.name, |b| {
            b.iter(|| construct_incompatible_pair(black_box(&inst.k)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_degree, bench_facets, bench_witness);
criterion_main!(benches);
