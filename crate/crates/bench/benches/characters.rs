use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use orbitchar::compact_char::weyl_character;
use orbitchar::cycle_integral::{integrate_character_cycle, CycleOptions};
use orbitchar::eigendist::pair_algebra;
use orbitchar::fixed_point::{discrete_series, induced_expression};
use orbitchar::lie_core::{build_root_system, Weight};
use orbitchar::orbit_geom::{conormal_circle_cycle, dlogf_graph_cycle};
use orbitchar::real_structure::{CartanElement, OrbitLabel};
use orbitchar::suite::pullback_suite;
use orbitchar::testfn::{complex, TestFunction};

fn compact(c: &mut Criterion) {
    let g2 = build_root_system("G2").unwrap();
    let lam = Weight::from_ints(&[2, 1]);
    c.bench_function("weyl_character G2 (2,1)", |b| {
        b.iter(|| weyl_character(&g2, black_box(&lam), black_box(&[0.3, 0.7])).unwrap())
    });
}

fn local_expressions(c: &mut Criterion) {
    let ds = discrete_series(OrbitLabel::UpperHalfPlane, 2).unwrap();
    c.bench_function("evaluate_group ds k=2", |b| {
        b.iter(|| {
            ds.evaluate_group(black_box(CartanElement::Split { eps: -1, s: 0.8 }))
                .unwrap()
        })
    });
    c.bench_function("evaluate_algebra ds k=2", |b| {
        b.iter(|| ds.evaluate_algebra(black_box([0.2, 0.9, -0.4])).unwrap())
    });
}

fn integrals(c: &mut Criterion) {
    let phi = TestFunction::gaussian([0.1, 0.2, -0.3], 0.8).unwrap();
    let ds = discrete_series(OrbitLabel::UpperHalfPlane, 1).unwrap();
    let ps = induced_expression(1, complex(0.0, 0.5)).unwrap();
    let graph = dlogf_graph_cycle(OrbitLabel::UpperHalfPlane, complex(-1.0, 0.0)).unwrap();
    let conormal = conormal_circle_cycle(complex(0.0, 0.5));
    let opts = CycleOptions::default();
    let mut g = c.benchmark_group("integrals");
    g.sample_size(10);
    g.bench_function("pair_algebra ds k=1", |b| {
        b.iter(|| pair_algebra(&ds, black_box(&phi)).unwrap())
    });
    g.bench_function("pair_algebra ps nu=0.5i", |b| {
        b.iter(|| pair_algebra(&ps, black_box(&phi)).unwrap())
    });
    g.bench_function("graph cycle k=1", |b| {
        b.iter(|| integrate_character_cycle(&graph, black_box(&phi), &opts).unwrap())
    });
    g.bench_function("conormal cycle nu=0.5i", |b| {
        b.iter(|| integrate_character_cycle(&conormal, black_box(&phi), &opts).unwrap())
    });
    g.finish();
}

fn geometry(c: &mut Criterion) {
    c.bench_function("pullback residuals x1000", |b| {
        b.iter(|| pullback_suite(black_box(1000), 1))
    });
}

criterion_group!(benches, compact, local_expressions, integrals, geometry);
criterion_main!(benches);
