use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmg_bench::cases;
use qmg_core::{
    evaluate, log_qmg_integer_closed, q_gamma, ComplexValue, MethodChoice, Precision, QParam,
};
use std::hint::black_box;

fn methods(c: &mut Criterion) {
    let prec = Precision::default().with_tol(1e-10);
    let mut group = c.benchmark_group("evaluate");
    for (name, qp, r, z) in cases() {
        for m in [
            MethodChoice::Product,
            MethodChoice::Euler,
            MethodChoice::Gauss,
        ] {
            group.bench_with_input(BenchmarkId::new(m.as_str(), name), &z, |b, &z| {
                b.iter(|| evaluate(r, black_box(z), &qp, &prec, m).unwrap())
            });
        }
        let left = z - 5.0;
        group.bench_with_input(BenchmarkId::new("recurrence", name), &left, |b, &w| {
            b.iter(|| evaluate(r, black_box(w), &qp, &prec, MethodChoice::Recurrence))
        });
    }
    group.finish();
}

fn closed_and_q_gamma(c: &mut Criterion) {
    let qp = QParam::new(0.9).unwrap();
    c.bench_function("closed_r4_N20", |b| {
        b.iter(|| log_qmg_integer_closed(4, black_box(20), &qp))
    });
    let prec = Precision::default();
    c.bench_function("q_gamma_q0.9", |b| {
        b.iter(|| q_gamma(&qp, black_box(ComplexValue::new(1.5, 2.0)), &prec).unwrap())
    });
}

criterion_group!(benches, methods, closed_and_q_gamma);
criterion_main!(benches);
