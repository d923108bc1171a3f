//! Benchmarks of the five main pipelines: quantum prediction, the
//! representability check, interval computation by LP, tree gluing, and
//! moment inversion.

use std::hint::black_box;

use corrext_bench::{dense_moments, random_graph, singlet_bch};
use corrext_core::sampling::DEFAULT_SEED;
use corrext_core::{
    bch_check, build_ghsz_scenario, extend_tree, lp_interval, moments_to_distribution,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn quantum_joint_distribution(c: &mut Criterion) {
    let scenario = build_ghsz_scenario();
    let context = scenario.contexts()[0].clone();
    c.bench_function("three-qubit context distribution", |b| {
        b.iter(|| {
            scenario
                .context_distribution(black_box(&context))
                .expect("context is measurable")
        })
    });
}

fn representability_check(c: &mut Criterion) {
    let data = singlet_bch();
    c.bench_function("four-observable representability check", |b| {
        b.iter(|| bch_check(black_box(&data)).expect("consistent data"))
    });
}

fn interval_by_lp(c: &mut Criterion) {
    let moments = singlet_bch().three_var_moments(1);
    c.bench_function("attainable range by LP", |b| {
        b.iter(|| lp_interval(black_box(&["A1", "A2"]), &moments).expect("valid inputs"))
    });
}

fn tree_extension(c: &mut Criterion) {
    let graph = random_graph(DEFAULT_SEED, 6);
    c.bench_function("six-variable tree extension", |b| {
        b.iter(|| extend_tree(black_box(&graph)).expect("consistent tree"))
    });
}

fn moment_inversion(c: &mut Criterion) {
    let moments = dense_moments(6);
    c.bench_function("six-variable moment inversion", |b| {
        b.iter(|| moments_to_distribution(black_box(&moments)).expect("realizable moments"))
    });
}

criterion_group!(
    pipelines,
    quantum_joint_distribution,
    representability_check,
    interval_by_lp,
    tree_extension,
    moment_inversion
);
criterion_main!(pipelines);
