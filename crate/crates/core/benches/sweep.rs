use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sp_arrange::verify::{run_verify, SweepParams};
use sp_arrange::Execution;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-sweep");
    group.sample_size(10);
    for (name, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::new(name, 100), &exec, |b, &exec| {
            b.iter(|| {
                black_box(run_verify(&SweepParams {
                    count: 100,
                    max_nodes: 10,
                    seed: 1,
                    exec,
                    ..SweepParams::default()
                }))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
