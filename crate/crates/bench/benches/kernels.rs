use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use cullenrec::{
    cmd_bounds_theorem2, cullen, dominant_root, frac_dist_log2, frac_min_upto, isolate_roots,
    kbonacci, BigInt, FracMinMethod, IntPolynomial, PipelineConfig, RealEnclosure,
};

fn kbonacci_poly(k: usize) -> IntPolynomial {
    let mut c = vec![-1i64; k];
    c.push(1);
    IntPolynomial::from_i64(&c)
}

fn sequences(c: &mut Criterion) {
    c.bench_function("kbonacci k=10 n=5000", |b| {
        b.iter(|| kbonacci(black_box(10), black_box(5000)))
    });
    c.bench_function("cullen m=139948 s=151", |b| {
        b.iter(|| cullen(black_box(139948), black_box(151)))
    });
}

fn roots(c: &mut Criterion) {
    // The certificate is memoized, so vary the precision to defeat the cache.
    let mut bits = 512u32;
    c.bench_function("dominant_root k=158", |b| {
        b.iter_batched(
            || {
                bits = if bits >= 4096 { 512 } else { bits + 1 };
                bits
            },
            |p| dominant_root(158, p),
            BatchSize::SmallInput,
        )
    });
    let p30 = kbonacci_poly(30);
    c.bench_function("isolate_roots degree 30", |b| {
        b.iter(|| isolate_roots(&p30, 256, 4096))
    });
}

fn reduction(c: &mut Criterion) {
    let m = (BigInt::from(1) << 137u32) + 1u32;
    c.bench_function("frac_dist_log2 2^137+1", |b| {
        b.iter(|| frac_dist_log2(black_box(&m), 512))
    });
    let max = RealEnclosure::from_decimal("2.5e41", 512).unwrap();
    c.bench_function("frac_min analytic 2.5e41", |b| {
        b.iter(|| frac_min_upto(&max, FracMinMethod::Analytic, 512))
    });
    let small = RealEnclosure::from_decimal("1e5", 512).unwrap();
    c.bench_function("frac_min brute force 1e5", |b| {
        b.iter(|| frac_min_upto(&small, FracMinMethod::BruteForce, 512))
    });
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    g.bench_function("bounds default", |b| {
        b.iter(|| cmd_bounds_theorem2(&PipelineConfig::default()))
    });
    g.finish();
}

criterion_group!(benches, sequences, roots, reduction, pipeline);
criterion_main!(benches);
