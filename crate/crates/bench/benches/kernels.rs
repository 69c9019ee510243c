use std::hint::black_box;

use contactgeo::constructions::{catalog, hopf_like_r5_to_r4, sasakian_r5, warped_s4, CatalogObject};
use contactgeo::manifold::PointSample;
use contactgeo::structure::ClassId;
use contactgeo::{verify, Jet2, Sampling, ScalarFieldExpr};
use criterion::{criterion_group, criterion_main, Criterion};

fn sampling() -> Sampling {
    Sampling {
        points: 8,
        vectors: 4,
        ..Sampling::default()
    }
}

fn jets(c: &mut Criterion) {
    let coords: Vec<String> = ["x", "y", "z", "u", "v"].iter().map(|s| s.to_string()).collect();
    let f = ScalarFieldExpr::parse("exp(x*y) * sin(z + u^2) / (2 + cos(v)) + sqrt(1 + x^2 + y^2)")
        .unwrap()
        .compile(&coords)
        .unwrap();
    let p = [0.1, -0.2, 0.3, 0.4, -0.5];
    let seeded: Vec<Jet2> = p.iter().enumerate().map(|(i, &x)| Jet2::variable(x, i, 5)).collect();
    c.bench_function("expr_eval_jet2_5vars", |b| {
        b.iter(|| f.eval(black_box(&seeded)).unwrap())
    });
}

fn point_data(c: &mut Criterion) {
    let s = sasakian_r5().unwrap();
    let p = PointSample::at(vec![0.1, 0.2, -0.3, 0.4, 0.5]);
    c.bench_function("acm_point_data_sasakian_r5", |b| {
        b.iter(|| s.point_data(black_box(&p)).unwrap())
    });
    let w = warped_s4().unwrap();
    let p = PointSample::at(vec![0.1, 0.2, -0.3, 0.4, 0.5]);
    c.bench_function("submersion_point_data_warped_s4", |b| {
        b.iter(|| w.point_data(black_box(&p)).unwrap())
    });
    let CatalogObject::Submersion(kt) = catalog("example31_kt").unwrap().object else {
        unreachable!()
    };
    let p = PointSample::at(vec![0.1; 9]);
    c.bench_function("submersion_point_data_dim9", |b| {
        b.iter(|| kt.point_data(black_box(&p)).unwrap())
    });
}

fn classify(c: &mut Criterion) {
    let s = sasakian_r5().unwrap();
    let sm = sampling();
    c.bench_function("classify_all_sasakian_r5", |b| {
        b.iter(|| s.classify_all(black_box(&sm)).unwrap())
    });
    c.bench_function("classify_alpha_sasakian_r5", |b| {
        b.iter(|| s.classify(ClassId::AlphaSasakian, black_box(&sm)).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let h = hopf_like_r5_to_r4().unwrap();
    let sm = sampling();
    c.bench_function("verify_all_hopf", |b| {
        b.iter(|| verify(&h, &["all"], black_box(&sm)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = jets, point_data, classify, verification
}
criterion_main!(benches);
