//! Hot paths: curvature assembly in both kernels, the full per-field
//! analysis, classification, the direction search, and one chart
//! finite-difference curvature evaluation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use triflow_core::{
    analyze, classify, find_all, mapping_torus_chart, ricci_fd_frame, FinderConfig, FrameModel,
    Orientation, Rational, Scalar, Tol, UnitField,
};

fn curvature_tables(c: &mut Criterion) {
    c.bench_function("curvature_float", |b| {
        b.iter(|| FrameModel::unimodular(black_box(1.0), black_box(2.0), black_box(3.0)))
    });
    c.bench_function("curvature_exact", |b| {
        b.iter(|| {
            FrameModel::unimodular(
                black_box(Rational::from_ratio(7, 5)),
                black_box(Rational::from_int(2)),
                black_box(Rational::from_ratio(-11, 3)),
            )
        })
    });
}

fn field_analysis(c: &mut Criterion) {
    let tol = Tol::default();
    let fmodel = FrameModel::unimodular(1.0, 2.0, 3.0);
    c.bench_function("analyze_float_axis", |b| {
        b.iter(|| analyze(&fmodel, UnitField::axis(2), Orientation::Positive, black_box(&tol)))
    });
    let qmodel = FrameModel::unimodular(
        Rational::from_int(1),
        Rational::from_int(2),
        Rational::from_int(3),
    );
    c.bench_function("analyze_exact_axis", |b| {
        b.iter(|| analyze(&qmodel, UnitField::axis(2), Orientation::Positive, black_box(&tol)))
    });
    let analysis = analyze(&qmodel, UnitField::axis(2), Orientation::Positive, &tol);
    c.bench_function("classify_exact", |b| {
        b.iter(|| classify(&qmodel, black_box(&analysis), &tol))
    });
}

fn direction_search(c: &mut Criterion) {
    let model = FrameModel::unimodular(1.0, 2.0, 3.0);
    let cfg = FinderConfig { n_starts: 16, ..FinderConfig::default() };
    c.bench_function("find_all_16_starts", |b| {
        b.iter(|| find_all(black_box(&model), &cfg))
    });
}

fn chart_curvature(c: &mut Criterion) {
    let chart = mapping_torus_chart([[2, 1], [1, 1]]).unwrap();
    let x = [0.1, -0.07, 0.13];
    c.bench_function("ricci_fd_frame", |b| {
        b.iter(|| ricci_fd_frame(&chart, black_box(&x), 1e-3).unwrap())
    });
}

criterion_group!(benches, curvature_tables, field_analysis, direction_search, chart_curvature);
criterion_main!(benches);
