use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use phl_bench::{MONOID_SEQUENTS, PULLBACK_SKETCH};
use phl_core::birkhoff::{hsp_closure, ModelUniverse};
use phl_core::finder::enumerate_models;
use phl_core::freemodel::representing_model;
use phl_core::library;
use phl_core::morphology::factorize;
use phl_core::prover::{check_derivation, golden, prove, Budget};
use phl_core::semantics::enumerate_homs;
use phl_core::syntax::{parse_formula_in_context, parse_sequent};
use phl_core::translation::{parse_sketch, sketch_models};

fn derivations(c: &mut Criterion) {
    let t = golden::theory();
    let all = golden::all(&t);
    c.bench_function("check_golden_derivations", |b| {
        b.iter(|| all.iter().all(|g| check_derivation(&t, black_box(&g.derivation)).is_valid()))
    });
}

fn proving(c: &mut Criterion) {
    let t = library::mon();
    let mut group = c.benchmark_group("prove_mon");
    for (i, text) in MONOID_SEQUENTS.iter().enumerate() {
        let s = parse_sequent(&t.signature, text).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(i), &s, |b, s| b.iter(|| prove(&t, s, Budget::new(3, 3))));
    }
    group.finish();
}

fn presentations(c: &mut Criterion) {
    let t = library::mon();
    let (ctx, phi) = parse_formula_in_context(&t.signature, "[x:*] . mul(x, x) = e").unwrap();
    let mut group = c.benchmark_group("representing_model");
    for depth in [2, 4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| representing_model(&t, &ctx, &phi, d).unwrap())
        });
    }
    group.finish();
}

fn model_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_models");
    group.sample_size(10);
    for (name, t, k) in [("pos", library::pos(), 4), ("mon", library::mon(), 4), ("cat", library::cat(), 2)] {
        group.bench_function(name, |b| b.iter(|| enumerate_models(&t, k)));
    }
    group.finish();
    let sketch = parse_sketch(PULLBACK_SKETCH).unwrap();
    let mut group = c.benchmark_group("sketch_models");
    group.sample_size(10);
    group.bench_function("pullback_3", |b| b.iter(|| sketch_models(&sketch, 3).unwrap()));
    group.finish();
}

fn factorizations(c: &mut Criterion) {
    let models = enumerate_models(&library::pos(), 3);
    let pairs: Vec<_> = models
        .iter()
        .flat_map(|a| models.iter().map(move |b| (a, b)))
        .flat_map(|(a, b)| enumerate_homs(a, b).into_iter().map(move |h| (a, b, h)))
        .collect();
    c.bench_function("factorize_pos3", |b| {
        b.iter(|| pairs.iter().map(|(a, t, h)| factorize(a, t, h).unwrap().mid.size()).sum::<usize>())
    });
}

fn closures(c: &mut Criterion) {
    let pos = library::pos();
    let pool = ModelUniverse::all(&pos, 4);
    let seed = pool.filter(|m| m.size() <= 2);
    let mut group = c.benchmark_group("hsp_closure");
    group.sample_size(10);
    group.bench_function("pos_from_size_2", |b| b.iter(|| hsp_closure(&seed, &pool, None).closure.len()));
    group.finish();
}

criterion_group!(benches, derivations, proving, presentations, model_search, factorizations, closures);
criterion_main!(benches);
