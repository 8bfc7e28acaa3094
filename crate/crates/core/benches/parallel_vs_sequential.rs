use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qgame_core::correlation::{ne_grid_search, CorrelationGameSpec, CorrelationModel, SearchSpace};
use qgame_core::epr::{simulate_report, ProtocolConfig};
use qgame_core::game::BimatrixGame;
use qgame_core::gfun::GFunction;
use qgame_core::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_report");
    group.sample_size(10);
    let config = ProtocolConfig {
        theta_a: PI / 3.0,
        theta_b: PI / 6.0,
        p_a: 0.5,
        p_b: 0.5,
        model: CorrelationModel::Singlet,
        runs: 1_000_000,
        seed: 7,
    };
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, config.runs), &exec, |b, &exec| {
            b.iter(|| simulate_report(black_box(&config), exec).unwrap())
        });
    }
    group.finish();
}

fn grid_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("ne_grid_search");
    group.sample_size(10);
    let spec = CorrelationGameSpec::new(
        BimatrixGame::named("pd1").unwrap(),
        GFunction::parse("g3").unwrap(),
        CorrelationModel::Singlet,
    );
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 501), &exec, |b, &exec| {
            b.iter(|| ne_grid_search(black_box(&spec), 501, SearchSpace::Angle, 1e-9, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, grid_search);
criterion_main!(benches);
