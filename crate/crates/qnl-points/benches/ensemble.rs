//! Parallel versus sequential execution of the ensemble pipeline:
//! generation of renewal runs followed by the periodogram.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qnl_ensemble::Execution;
use qnl_math::RenewalLaw;
use qnl_points::{estimate_spectrum_with, gen_poisson, gen_renewal, Ensemble};

fn pipeline(exec: Execution, runs: usize) -> f64 {
    let law = RenewalLaw::exponential(1.0);
    let ens = Ensemble::generate(runs, 1, "bench", exec, |rng, _| {
        gen_renewal(&law, 2000.0, 0.0, rng)
    })
    .unwrap();
    let s = estimate_spectrum_with(&ens, None, 1, 200, exec).unwrap();
    s.spectrum[0]
}

fn poisson_generation(exec: Execution, runs: usize) -> usize {
    Ensemble::generate(runs, 2, "bench-poisson", exec, |rng, _| {
        gen_poisson(1.0, 1e4, rng)
    })
    .unwrap()
    .total_events()
}

fn compare(c: &mut Criterion) {
    let mut modes = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    modes.push(("parallel", Execution::with_cap(None)));

    let mut group = c.benchmark_group("spectrum_pipeline");
    group.sample_size(10);
    for (name, exec) in &modes {
        group.bench_with_input(BenchmarkId::new(*name, 32), &32, |b, &runs| {
            b.iter(|| pipeline(*exec, runs))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("poisson_generation");
    group.sample_size(10);
    for (name, exec) in &modes {
        group.bench_with_input(BenchmarkId::new(*name, 64), &64, |b, &runs| {
            b.iter(|| poisson_generation(*exec, runs))
        });
    }
    group.finish();
}

criterion_group!(benches, compare);
criterion_main!(benches);
