use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use truncmat::kernels::{BiorthogonalSystem, ContourKernel, ContourOptions};
use truncmat::sampling::sample_product_draws;
use truncmat::{Execution, ProductSpec};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn grid(k: usize) -> Vec<f64> {
    (1..=k).map(|i| i as f64 / (k + 1) as f64).collect()
}

fn bench_sampling(c: &mut Criterion) {
    let spec = ProductSpec::new(3, vec![1, 0], vec![9, 6]).unwrap();
    let mut group = c.benchmark_group("product_draws");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, 4096), &exec, |b, &exec| {
            b.iter(|| sample_product_draws(black_box(&spec), 4096, 7, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_sum_kernel(c: &mut Criterion) {
    let spec = ProductSpec::new(4, vec![1, 0], vec![11, 7]).unwrap();
    let sys = BiorthogonalSystem::new(&spec).unwrap();
    let xs = grid(32);
    let mut group = c.benchmark_group("sum_kernel_grid");
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, 32), &exec, |b, &exec| {
            b.iter(|| sys.kernel_grid(black_box(&xs), &xs, exec))
        });
    }
    group.finish();
}

fn bench_contour_kernel(c: &mut Criterion) {
    let spec = ProductSpec::new(3, vec![1, 0], vec![9, 6]).unwrap();
    let xs = grid(8);
    let mut group = c.benchmark_group("contour_kernel_grid");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        let kernel = ContourKernel::new(&spec, ContourOptions { exec, ..Default::default() }).unwrap();
        group.bench_with_input(BenchmarkId::new(name, 8), &kernel, |b, kernel| {
            b.iter(|| kernel.grid(black_box(&xs), &xs).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sampling, bench_sum_kernel, bench_contour_kernel);
criterion_main!(benches);
