use std::hint::black_box;

use algvar_core::arith::Budget;
use algvar_core::catalog::{builtin_catalog, builtin_degenerations, builtin_nondegenerations, check_entry, entry};
use algvar_core::degeneration::{verify_certificate, verify_nondegenerations, verify_witnesses, Resolver};
use algvar_core::graph::DegenerationGraph;
use algvar_core::invariants::{der_dim, invariant_profile};
use criterion::{criterion_group, criterion_main, Criterion};

fn table1(c: &mut Criterion) {
    let cat = builtin_catalog();
    c.bench_function("table1", |b| b.iter(|| cat.iter().map(|e| check_entry(e, 1)).count()));
    let n10 = entry("N10").unwrap().at(None).unwrap();
    c.bench_function("der_dim N10", |b| b.iter(|| der_dim(black_box(&n10))));
    c.bench_function("profile N10", |b| b.iter(|| invariant_profile(black_box(&n10), &Budget::default())));
}

fn witnesses(c: &mut Criterion) {
    let r = Resolver::builtin();
    c.bench_function("all witnesses", |b| b.iter(|| verify_witnesses(builtin_degenerations(), &r, None)));
}

fn certificates(c: &mut Criterion) {
    let r = Resolver::builtin();
    let doc = builtin_nondegenerations();
    let mut g = c.benchmark_group("certificates");
    g.sample_size(10);
    for cert in doc.certificates() {
        g.bench_function(cert.name.as_str(), |b| b.iter(|| verify_certificate(cert, &|s| r.get(s), &Budget::default())));
    }
    g.finish();
}

fn graph(c: &mut Criterion) {
    let r = Resolver::builtin();
    let ws = verify_witnesses(builtin_degenerations(), &r, None);
    let ns = verify_nondegenerations(builtin_nondegenerations(), &r, &Budget::default(), 1);
    let mut g = c.benchmark_group("graph");
    g.sample_size(10);
    g.bench_function("build", |b| b.iter(|| DegenerationGraph::build(&r, &ws, &ns).unwrap()));
    g.finish();
}

criterion_group!(benches, table1, witnesses, certificates, graph);
criterion_main!(benches);
