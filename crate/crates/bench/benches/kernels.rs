use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use indivisible_core::zeta::count_degree_one_places;
use indivisible_core::{build_rikuna, build_tower, make_field, Poly};

fn field_mul(c: &mut Criterion) {
    let f = make_field(5, 8).unwrap();
    let a = f.from_index(123_456);
    let b = f.from_index(301_777);
    c.bench_function("mul in F_5^8", |bench| bench.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("inverse in F_5^8", |bench| bench.iter(|| black_box(&a).inv().unwrap()));
}

fn irreducibility(c: &mut Criterion) {
    let f = make_field(5, 1).unwrap();
    // x^8 + x^4 + 3x^2 + 2x + 1 and a product of two quartics
    let g = Poly::from_i64s(&f, &[1, 2, 3, 0, 1, 0, 0, 0, 1]);
    let h = &Poly::from_i64s(&f, &[2, 0, 0, 1, 1]) * &Poly::from_i64s(&f, &[3, 1, 0, 0, 1]);
    c.bench_function("rabin degree 8", |bench| bench.iter(|| black_box(&g).is_irreducible().unwrap()));
    c.bench_function("factor degree 8", |bench| bench.iter(|| black_box(&h).factor().unwrap()));
}

fn point_counting(c: &mut Criterion) {
    let spec = build_tower(5, 3, 2, 1, 10_000).unwrap();
    let mut group = c.benchmark_group("count places");
    group.sample_size(10);
    for i in [2u32, 4, 6] {
        group.bench_function(format!("(5,3,2,1) over F_5^{i}"), |bench| {
            bench.iter(|| count_degree_one_places(&spec.curve, i, Some(1)).unwrap())
        });
    }
    group.finish();
}

fn iterate_r(c: &mut Criterion) {
    let sys = build_rikuna(13, 7).unwrap();
    let mut group = c.benchmark_group("iterate r");
    group.sample_size(10);
    for j in [2u32, 3, 4] {
        group.bench_function(format!("l=7 q=13 j={j}"), |bench| {
            bench.iter(|| sys.iterate_r(j, 10_000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, field_mul, irreducibility, point_counting, iterate_r);
criterion_main!(benches);
