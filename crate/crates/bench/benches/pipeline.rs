use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use odelin_core::diffalg::total_derivative;
use odelin_core::symmetry::symmetry_ranking;
use odelin_core::{
    determining_system, janet_complete, linearization_test_1, linearization_test_2, parse_ode,
    DiffPolynomial, ODEProblem,
};

/// `(y^2)^(n) + y^2 = 0`.
fn square_family(n: u32) -> ODEProblem {
    let mut p = DiffPolynomial::y().pow(2);
    for _ in 0..n {
        p = total_derivative(&p);
    }
    parse_ode(&format!("{p} + y^2 = 0"), &[], &[]).unwrap()
}

fn janet(c: &mut Criterion) {
    let mut g = c.benchmark_group("janet_complete");
    for n in [2u32, 3, 5] {
        let q = parse_ode(&format!("y{} = 0", "'".repeat(n as usize)), &[], &[]).unwrap();
        let ds = determining_system(&q).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &ds, |b, ds| {
            b.iter(|| janet_complete(black_box(ds), &symmetry_ranking()).unwrap())
        });
    }
    g.finish();
}

fn test1(c: &mut Criterion) {
    let mut g = c.benchmark_group("test1_square_family");
    for n in 3..=6 {
        let q = square_family(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| linearization_test_1(black_box(q)).unwrap())
        });
    }
    g.finish();
}

fn test2(c: &mut Criterion) {
    let mut g = c.benchmark_group("test2");
    g.sample_size(10);
    let cases = [
        ("square_family_3", square_family(3)),
        (
            "lie_family",
            parse_ode(
                "y'' + F3*y'^3 + F2*y'^2 + F1*y' + F0 = 0",
                &[],
                &["F3", "F2", "F1", "F0"],
            )
            .unwrap(),
        ),
        (
            "fourth_order_h",
            parse_ode(
                "2*x^2*y*y'''' + x^2*y^2 + h*y'*y''' + 16*x*y*y''' + 6*x^2*y''^2 \
                 + 48*x*y'*y'' + 24*y*y'' + 24*y'^2 = 0",
                &[],
                &["h"],
            )
            .unwrap(),
        ),
    ];
    for (name, q) in &cases {
        g.bench_function(*name, |b| b.iter(|| linearization_test_2(black_box(q)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, janet, test1, test2);
criterion_main!(benches);
