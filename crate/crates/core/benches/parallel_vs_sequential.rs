use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gcheeger_core::oracles::{self, OracleLimit};
use gcheeger_core::{
    generate, inverse_power_minimize, EigenConfig, Execution, Family, SolveConfig, Verifier, Weights,
};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn gnp(n: usize, p: f64, seed: u64) -> gcheeger_core::Graph {
    generate(Family::Gnp { n, p }, Weights::Uniform, seed).unwrap()
}

fn exact_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("generalized_conductance_exact");
    group.sample_size(10);
    for n in [14, 18] {
        let g = gnp(n, 0.4, 1);
        let h = gnp(n, 0.4, 2);
        for (name, exec) in MODES {
            let limit = OracleLimit::default().with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| {
                    oracles::generalized_conductance_exact(black_box(&g), black_box(&h), &limit).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn eigen_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse_power_minimize");
    group.sample_size(10);
    for n in [100, 300] {
        let g = gnp(n, 8.0 / n as f64, 3);
        let h = g.demand_graph().unwrap();
        for (name, exec) in MODES {
            let cfg = EigenConfig {
                execution: exec,
                ..EigenConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| {
                    inverse_power_minimize(black_box(&g), black_box(&h), &cfg, &SolveConfig::default())
                        .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn verifier_samples(c: &mut Criterion) {
    let mut group = c.benchmark_group("verifier_samples");
    group.sample_size(10);
    let g = gnp(12, 0.5, 4);
    let h = gnp(12, 0.5, 5);
    for (name, exec) in MODES {
        let v = Verifier::default().with_execution(exec);
        group.bench_function(BenchmarkId::new(name, "theorem+mihail"), |b| {
            b.iter(|| {
                let t = v.check_generalized_cheeger(&g, &h, 500, 0).unwrap();
                let m = v.check_mihail(&g, 500, 0).unwrap();
                t.len() + m.len()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, exact_oracle, eigen_trials, verifier_samples);
criterion_main!(benches);
