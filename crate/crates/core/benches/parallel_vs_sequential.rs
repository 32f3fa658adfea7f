use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fd_dof::ia::{monte_carlo_with, DEFAULT_TOL};
use fd_dof::rate::{default_power_ladder, estimate_dof_slope_with};
use fd_dof::verify::verify_grid_with;
use fd_dof::{Execution, RngSeed};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_grid");
    g.sample_size(10);
    for bound in [4, 8] {
        for (name, exec) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, bound), &bound, |b, &bound| {
                b.iter(|| verify_grid_with(black_box(bound), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn alignment(c: &mut Criterion) {
    let mut g = c.benchmark_group("ia_monte_carlo");
    g.sample_size(10);
    for (m2, n2) in [(2, 4), (3, 8)] {
        for (name, exec) in STRATEGIES {
            g.bench_function(BenchmarkId::new(name, format!("m2={m2},n2={n2}")), |b| {
                b.iter(|| monte_carlo_with(2, m2, n2, 100, RngSeed(1), DEFAULT_TOL, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn slope(c: &mut Criterion) {
    let ladder = default_power_ladder();
    let mut g = c.benchmark_group("dof_slope");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_function(name, |b| {
            b.iter(|| estimate_dof_slope_with(2, 2, 4, &ladder, RngSeed(1), 20, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, grid, alignment, slope);
criterion_main!(benches);
