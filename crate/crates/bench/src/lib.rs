//! Criterion benchmarks for the planner, a single trial and a full run.

use std::hint::black_box;

use criterion::Criterion;
use curio_core::{
    plan_distance, plan_distance_dp, run_experiment_with, run_trial, Execution, ExperimentConfig,
    GridPos, WorldLayout,
};

pub fn planner(c: &mut Criterion) {
    let layout = WorldLayout::default();
    let target = GridPos::new(1, 5);
    c.bench_function("plan_distance/bfs/11", |b| {
        b.iter(|| plan_distance(black_box(&layout), black_box(target)))
    });
    c.bench_function("plan_distance/dp/11", |b| {
        b.iter(|| plan_distance_dp(black_box(&layout), black_box(target)))
    });
}

pub fn trials(c: &mut Criterion) {
    let config = ExperimentConfig::default();
    c.bench_function("run_trial/5000", |b| {
        b.iter(|| run_trial(black_box(&config), 0))
    });

    let mut group = c.benchmark_group("run_experiment/30x5000");
    group.sample_size(10);
    for (name, execution) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| run_experiment_with(black_box(&config), execution))
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    planner(c);
    trials(c);
}
