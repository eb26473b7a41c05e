use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use zitter::channeling::{momentum_scan, ScanConfig};
use zitter::par::Execution;

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("momentum_scan");
    group.sample_size(10);
    for (label, execution) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        let mut config = ScanConfig::new(80.0, 81.8, 25);
        config.r0_samples = 16;
        config.execution = execution;
        group.bench_with_input(BenchmarkId::new(label, "25x16"), &config, |b, config| {
            b.iter(|| momentum_scan(black_box(config)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, scan);
criterion_main!(benches);
