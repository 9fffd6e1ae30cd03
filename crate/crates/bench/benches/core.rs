use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ias_core::builders::{build_center_chord, build_special, LagrangianInput};
use ias_core::domain::DomainBox;
use ias_core::eds::eds_check;
use ias_core::immersion::{blaschke_metric, is_ias, nabla_hat_a};
use ias_core::linalg::{int, rat};
use ias_core::parse::{parse_gpoly, parse_qpoly};
use ias_core::singularities::{catalog_verify, local_algebra, RealizationKind, SingularityLabel};
use ias_core::Rational;

fn charts(c: &mut Criterion) {
    let sp = LagrangianInput::Potential(parse_qpoly("u1^3 + u1 u2^2 - u2^4/4", "u", 2).unwrap());
    let sm = LagrangianInput::Potential(parse_qpoly("u1^2 u2 - u2^3/3 + u1^4", "u", 2).unwrap());
    let domain = DomainBox::cube(4, rat(1, 2));
    let h = parse_gpoly("z1^3 + i z1 z2^2 + z2^4", "z", 2).unwrap();

    c.bench_function("build_center_chord n=2", |b| {
        b.iter(|| build_center_chord(black_box(&sm), black_box(&sp), domain.clone(), None).unwrap())
    });
    c.bench_function("build_special n=2", |b| b.iter(|| build_special(black_box(&h), domain.clone()).unwrap()));

    let chart = build_center_chord(&sm, &sp, domain.clone(), None).unwrap();
    let pts = domain.random_points(5, 1);
    c.bench_function("is_ias symbolic n=2", |b| b.iter(|| is_ias(black_box(&chart), &pts).unwrap()));
    c.bench_function("blaschke_metric exact", |b| {
        b.iter(|| blaschke_metric::<Rational>(black_box(&chart), &pts[0]).unwrap())
    });
    let fpts: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(ias_core::Scalar::to_f64).collect()).collect();
    c.bench_function("blaschke_metric f64", |b| {
        b.iter(|| blaschke_metric::<f64>(black_box(&chart), &fpts[0]).unwrap())
    });
    c.bench_function("nabla_hat_a exact", |b| b.iter(|| nabla_hat_a::<Rational>(black_box(&chart), &pts[0]).unwrap()));
    c.bench_function("eds_check exact 5 samples", |b| {
        b.iter(|| eds_check::<Rational>(black_box(&chart), &pts).unwrap())
    });
}

fn singularities(c: &mut Criterion) {
    let e6 = parse_qpoly("k1^3 + k2^4", "k", 2).unwrap();
    c.bench_function("local_algebra E6 germ", |b| b.iter(|| local_algebra(black_box(&e6)).unwrap()));
    let a9 = parse_qpoly("k1^10", "k", 1).unwrap();
    c.bench_function("local_algebra A9 germ", |b| b.iter(|| local_algebra(black_box(&a9)).unwrap()));
    for (name, n, kind) in [
        ("A7+", 5, RealizationKind::CenterChord),
        ("E8", 5, RealizationKind::Special),
        ("D11", 5, RealizationKind::CenterChord),
    ] {
        let label = SingularityLabel::parse(name, n, kind).unwrap();
        c.bench_function(&format!("catalog_verify {label}"), |b| b.iter(|| catalog_verify(black_box(&label))));
    }
    let _ = int(0);
}

criterion_group!(benches, charts, singularities);
criterion_main!(benches);
