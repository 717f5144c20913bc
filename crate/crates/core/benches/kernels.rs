use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use voa_modular::genus2::{chequered_oracle, trace_powers, Rescale};
use voa_modular::heisenberg::qv_involution_sum;
use voa_modular::lattice::{e8_lattice, shell_counts};
use voa_modular::mlde::verify_k2_table;
use voa_modular::par::{is_parallel, with_threads};
use voa_modular::virasoro::{gram_matrix_with, Strategy};
use voa_modular::Partition;

/// Runs `f` once on a single worker and once on the default pool.
fn compare<R: Send>(c: &mut Criterion, name: &str, f: impl Fn() -> R + Sync + Send + Copy) {
    let mut g = c.benchmark_group(name);
    g.sample_size(10);
    let pools: &[(&str, usize)] = if is_parallel() { &[("sequential", 1), ("parallel", 0)] } else { &[("sequential", 1)] };
    for &(label, threads) in pools {
        g.bench_with_input(BenchmarkId::from_parameter(label), &threads, |b, &t| {
            b.iter(|| with_threads(t, || black_box(f())))
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let lam: Partition = "1^6 2^3 3^3".parse().unwrap();
    compare(c, "pairing_sum_12_parts", || qv_involution_sum(&lam));
    compare(c, "chequered_oracle_6", || chequered_oracle(6));
    compare(c, "trace_powers_k16_n8", || trace_powers(16, 8, Rescale::Column).unwrap());
    compare(c, "e8_shells_8", || shell_counts(&e8_lattice(), 8).unwrap());
    compare(c, "gram_matrix_8", || gram_matrix_with(8, Strategy::Pbw));
    compare(c, "griess_table", || verify_k2_table().unwrap());
}

criterion_group!(benches, kernels);
criterion_main!(benches);
