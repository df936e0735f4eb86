use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use landokh::homotopy::{reduce_with, ReduceOptions};
use landokh::khovanov::extreme_complex;
use landokh::lando::extreme_kh_via_lando;
use landokh::pretzel::{lando_main2, standard_pd, tilde_pd_pq_negr};
use landokh::simplicial::{independence_complex, smith_normal_form};
use landokh::Graph;

fn extreme_homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("extreme_kh");
    for spec in ["P(2,3,4)", "P(3,-3,-3)", "P(-3,-3,-4)"] {
        let d = standard_pd(&spec.parse().unwrap());
        group.bench_with_input(BenchmarkId::new("brute_force", spec), &d, |b, d| {
            b.iter(|| extreme_complex(black_box(d), 16).unwrap().homology().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lando", spec), &d, |b, d| {
            b.iter(|| extreme_kh_via_lando(black_box(d), 24).unwrap())
        });
    }
    let d = tilde_pd_pq_negr(2, 2, 3).unwrap();
    group.bench_function("lando/deformed P(2,2,-3)", |b| b.iter(|| extreme_kh_via_lando(black_box(&d), 24).unwrap()));
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    let g = lando_main2(6, 6, 6, false).unwrap().graph;
    for memoize in [true, false] {
        let opts = ReduceOptions { memoize, ..Default::default() };
        group.bench_function(format!("main2(6,6,6) memo={memoize}"), |b| b.iter(|| reduce_with(black_box(&g), &opts)));
    }
    let c15 = Graph::cycle(15).unwrap();
    group.bench_function("C15", |b| b.iter(|| reduce_with(black_box(&c15), &ReduceOptions::default())));
    group.finish();
}

fn homology(c: &mut Criterion) {
    let g = Graph::cycle(18).unwrap();
    c.bench_function("independence_complex C18", |b| b.iter(|| independence_complex(black_box(&g), 24).unwrap()));
    let k = independence_complex(&g, 24).unwrap();
    let m = k.boundary_matrix(4);
    c.bench_function("snf C18 boundary_4", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

criterion_group!(benches, extreme_homology, reduction, homology);
criterion_main!(benches);
