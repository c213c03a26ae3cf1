use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use maxcut_bridge::bounds::{gw_round_with, RoundingOptions};
use maxcut_bridge::exec::Exec;
use maxcut_bridge::instances::{self, Family, GeneratorSpec};
use maxcut_bridge::relaxations::{shor_maxcut, BoundName};
use maxcut_bridge::report::{self, BruteForceMode, SolveOptions, Sweep, SweepAxis};
use maxcut_bridge::sdp::{Sense, SolverConfig};
use maxcut_bridge::{penalty, reduction};

const MODES: [(&str, Exec); 2] = [("serial", Exec::Serial), ("parallel", Exec::Parallel)];

fn brute_force(c: &mut Criterion) {
    let q = instances::kcluster(20, 8, 0.4, 1).unwrap().1;
    let mut g = c.benchmark_group("brute_force_kcluster20");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| instances::brute_force_with(&q, exec).unwrap())
        });
    }
    g.finish();
}

fn rounding(c: &mut Criterion) {
    let q = instances::knapsack_fixed(15, 1).unwrap();
    let cfg = SolverConfig::default();
    let pb = penalty::rho(q.c(), q.f(), &cfg).unwrap();
    let mc = reduction::homogenize(&q, &pb);
    let x = shor_maxcut(&mc, Sense::Min, &cfg).unwrap().sdp.unwrap().x;
    let opts = RoundingOptions { trials: 1000, ..RoundingOptions::default() };
    let mut g = c.benchmark_group("gw_round_1000_trials");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| gw_round_with(&x, &mc, opts, exec).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let sweep = Sweep {
        base: GeneratorSpec { family: Family::KnapsackFixed, n: 4, ..GeneratorSpec::default() },
        axis: SweepAxis::B,
        values: (-34..=34).collect(),
        seeds: vec![0],
    };
    let mut g = c.benchmark_group("sweep_knapsack4");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = SolveOptions {
            selectors: vec![BoundName::MaxcutShorMin, BoundName::LpBox],
            brute_force: BruteForceMode::Always,
            exec,
            ..SolveOptions::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| report::run_sweep(&sweep, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, brute_force, rounding, sweep);
criterion_main!(benches);
