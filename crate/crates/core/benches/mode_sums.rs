//! Sequential versus parallel execution of the two hot kernels: the
//! checkpointed force sum and the zero-table rows.

use casimir_core::cavity::checkpoint_force_sums_with;
use casimir_core::constants::REFERENCE_Y_P;
use casimir_core::specfun::BesselZeroTable;
use casimir_core::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn strategies() -> Vec<(&'static str, Exec)> {
    let mut out = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Exec::Parallel));
    out
}

fn force_sums(c: &mut Criterion) {
    let zeros = BesselZeroTable::compute(150, 150, Exec::default()).unwrap();
    let mut group = c.benchmark_group("force_sums");
    group.sample_size(10);
    for k in [50usize, 150] {
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, k), &k, |b, &k| {
                b.iter(|| checkpoint_force_sums_with(1.0, REFERENCE_Y_P, &[k], &zeros, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn zero_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("zero_table");
    group.sample_size(10);
    for size in [50u32, 120] {
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, size), &size, |b, &size| {
                b.iter(|| BesselZeroTable::compute(size, size, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, force_sums, zero_table);
criterion_main!(benches);
