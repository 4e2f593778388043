//! Sequential against rayon-parallel execution of the same batch work.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fiberstar::exec::Exec;
use fiberstar::random::SymbolGen;
use fiberstar::scalars::rat;
use fiberstar::starcore::StarContext;
use fiberstar::verify::{self, curved_geometry, SuiteConfig};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn star_batch(c: &mut Criterion) {
    let ctx = StarContext::new(curved_geometry())
        .with_kappa(rat(1, 2))
        .unwrap()
        .with_order(5);
    let mut gen = SymbolGen::new(1, 2);
    let pairs: Vec<_> = (0..32)
        .map(|_| (gen.symbol(3, 2, 3), gen.symbol(3, 2, 3)))
        .collect();
    let mut group = c.benchmark_group("star_batch_32");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| exec.map(&pairs, |(f, g)| ctx.star(f, g).unwrap()))
        });
    }
    group.finish();
}

fn assoc_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("assoc_suite_order4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            order: 4,
            samples: 8,
            exec,
            ..SuiteConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| verify::run("assoc", cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, star_batch, assoc_suite);
criterion_main!(benches);
