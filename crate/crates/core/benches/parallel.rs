//! Sequential against parallel execution on the crate's data-parallel loops.
//!
//! Run with `cargo bench -p spanhyper-core`. Without the `parallel` feature
//! both variants run on one thread and should time the same.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spanhyper_core::generators::{gnp, hamilton_cycle, Family};
use spanhyper_core::montecarlo::{monte_carlo_curve, CurveOptions};
use spanhyper_core::search::DEFAULT_BUDGET;
use spanhyper_core::second_moment::{enumerate_hosts, OracleCaps};
use spanhyper_core::thresholds::{gamma_with, UNLIMITED};
use spanhyper_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_gamma(c: &mut Criterion) {
    let h = gnp(14, 3, 0.25, 7).unwrap();
    let mut g = c.benchmark_group("gamma");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| gamma_with(&h, exec, UNLIMITED).unwrap())
        });
    }
    g.finish();
}

fn bench_hosts(c: &mut Criterion) {
    let f = hamilton_cycle(6, 3, 0).unwrap();
    let caps = OracleCaps::default();
    let mut g = c.benchmark_group("host_enumeration");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_hosts(&f, 6, 5, &caps, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_curve(c: &mut Criterion) {
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut g = c.benchmark_group("threshold_curve");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = CurveOptions { coupled: true, budget: DEFAULT_BUDGET, exec };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, &opts| {
            b.iter(|| monte_carlo_curve(Family::TightHamilton, 9, 3, &grid, 100, 1, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_gamma, bench_hosts, bench_curve);
criterion_main!(benches);
