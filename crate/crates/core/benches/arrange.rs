use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use sp_arrange::arrange::arrange_by_lists;
use sp_arrange::arrange;
use sp_arrange::verify::bench_tree;

fn arrange_sizes(c: &mut Criterion) {
    let mut group = c.benchmark_group("arrange");
    group.sample_size(10);
    for edges in [10_000, 100_000, 1_000_000] {
        let t = bench_tree(edges, 1);
        group.throughput(Throughput::Elements(t.edge_count() as u64));
        group.bench_with_input(BenchmarkId::new("lazy", edges), &t, |b, t| {
            b.iter(|| black_box(arrange(t).unwrap()))
        });
        if edges <= 100_000 {
            group.bench_with_input(BenchmarkId::new("lists", edges), &t, |b, t| {
                b.iter(|| black_box(arrange_by_lists(t).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, arrange_sizes);
criterion_main!(benches);
