use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use mobsum_core::arith::{mobius_sieve, AdditiveCharacter};
use mobsum_core::dynamics::{period, MobiusMatrix};
use mobsum_core::field::{FpElem, PrimeModulus};
use mobsum_core::reduce::{sum_range_parallel, sum_range_sequential};
use num_complex::Complex64;

fn twisted(c: &mut Criterion) {
    let p = PrimeModulus::new(10007).unwrap();
    let m = MobiusMatrix::from_u64(3, 11, 7, 26, p).unwrap();
    let tr = period(&m, FpElem::new(5, p)).unwrap();
    let psi = AdditiveCharacter::from_u64(1, p);
    let n_max = 4_000_000;
    let mu = mobius_sieve(n_max).unwrap();
    let term = |i: u64| match mu.get(i) {
        0 => Complex64::new(0.0, 0.0),
        s => psi.eval_raw(tr.value_at(i)) * f64::from(s),
    };

    let mut group = c.benchmark_group("twisted_sum");
    for n in [100_000u64, 1_000_000, 4_000_000] {
        group.throughput(Throughput::Elements(n));
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| sum_range_sequential(1, black_box(n) + 1, term).value())
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| sum_range_parallel(1, black_box(n) + 1, term).value())
        });
    }
    group.finish();
}

fn correlation(c: &mut Criterion) {
    let p = PrimeModulus::new(1_000_003).unwrap();
    let m = MobiusMatrix::from_u64(2, 3, 5, 8, p).unwrap();
    let tr = period(&m, FpElem::new(4, p)).unwrap();
    let t = tr.period;
    let values = tr.values();
    let term = |n: u64| {
        let x = values[(3 * n % t) as usize];
        let y = values[(7 * n % t) as usize];
        mobsum_core::arith::unit_circle_reduced(p.add(x, p.mul(5, y)), p.get())
    };

    let mut group = c.benchmark_group("correlation_full_period");
    group.throughput(Throughput::Elements(t));
    group.bench_function(BenchmarkId::new("sequential", t), |b| {
        b.iter(|| sum_range_sequential(1, black_box(t) + 1, term).value())
    });
    group.bench_function(BenchmarkId::new("parallel", t), |b| {
        b.iter(|| sum_range_parallel(1, black_box(t) + 1, term).value())
    });
    group.finish();
}

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("mobius_sieve");
    group.sample_size(10);
    for limit in [1_000_000u64, 10_000_000] {
        group.throughput(Throughput::Elements(limit));
        group.bench_with_input(BenchmarkId::from_parameter(limit), &limit, |b, &l| {
            b.iter(|| mobius_sieve(black_box(l)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, twisted, correlation, sieve);
criterion_main!(benches);
