//! Timings of the hot paths: the Hungarian solve, one pair power solve, and
//! a full per-realization method evaluation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twocell::assign::{hungarian_max, CostMatrix};
use twocell::channel::generate_realization;
use twocell::harness::evaluate_method;
use twocell::power::{dinkelbach, fractional_form};
use twocell::{Method, PairChannel, SimConfig};

fn random_matrix(rng: &mut ChaCha8Rng, size: usize) -> CostMatrix {
    CostMatrix::new(
        (0..size)
            .map(|_| (0..size).map(|_| rng.gen::<f64>()).collect())
            .collect(),
    )
    .unwrap()
}

fn bench_hungarian(c: &mut Criterion) {
    let mut group = c.benchmark_group("hungarian_max");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in [3usize, 8, 32] {
        let cm = random_matrix(&mut rng, size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &cm, |b, cm| {
            b.iter(|| hungarian_max(std::hint::black_box(cm)))
        });
    }
    group.finish();
}

fn bench_pair_solve(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut gain = {
        let rng = &mut rng;
        move || 10f64.powf(rng.gen_range(-3.0..1.0))
    };
    let channels: Vec<PairChannel> = (0..64)
        .map(|_| PairChannel::new(gain(), gain(), gain(), gain(), 1.0))
        .collect();
    c.bench_function("dinkelbach_pair_solve_x64", |b| {
        b.iter(|| {
            for pc in &channels {
                let out = dinkelbach(&fractional_form(pc), 10.0, 1e-8).unwrap();
                std::hint::black_box(out.lambda);
            }
        })
    });
}

fn bench_evaluate_method(c: &mut Criterion) {
    let cfg = SimConfig::new(3);
    let r = generate_realization(&cfg, 0);
    let mut group = c.benchmark_group("evaluate_method_n3");
    for method in [
        Method::HungarianOpt,
        Method::ExhaustiveOpt,
        Method::RandomFull,
    ] {
        group.bench_with_input(
            BenchmarkId::from_parameter(method),
            &method,
            |b, &method| b.iter(|| evaluate_method(method, &r, &cfg, 20.0).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_hungarian,
    bench_pair_solve,
    bench_evaluate_method
);
criterion_main!(benches);
