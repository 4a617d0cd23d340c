use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saari_core::fixtures::equilateral_triangle;
use saari_core::probe::{residual, uniform_grid, ProbeLaw, TrigFamily};
use saari_core::{integrate, Bodies, ForceLaw, IntegratorConfig, Method, PhaseState, System};

fn random_system(n: usize, rng: &mut ChaCha8Rng) -> (System, PhaseState) {
    let system = System::new(Bodies::equal(n, 3).unwrap(), ForceLaw::newtonian());
    let q: Vec<f64> = (0..3 * n).map(|_| rng.random_range(-10.0..10.0)).collect();
    let state = PhaseState::new(0.0, 3, q, vec![0.0; 3 * n]).unwrap();
    (system, state)
}

fn accelerations(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("accelerations");
    for n in [3usize, 16, 64] {
        let (system, state) = random_system(n, &mut rng);
        let mut acc = vec![0.0; state.q.len()];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| system.accelerations_into(black_box(&state.q), &mut acc).unwrap())
        });
    }
    group.finish();
}

fn integrators(c: &mut Criterion) {
    let (system, state) = equilateral_triangle(ForceLaw::newtonian(), 0.0);
    let mut group = c.benchmark_group("integrate_triangle_t10");
    let configs = [
        ("adaptive_1e-10", IntegratorConfig::adaptive(10.0, 1e-10)),
        ("rk4_h1e-3", IntegratorConfig::fixed(Method::Rk4Fixed, 1e-3, 10.0).with_sample_every(100)),
        ("leapfrog_h1e-3", IntegratorConfig::fixed(Method::Leapfrog, 1e-3, 10.0).with_sample_every(100)),
    ];
    for (name, cfg) in configs {
        group.bench_function(name, |b| b.iter(|| integrate(&system, black_box(&state), &cfg).unwrap()));
    }
    group.finish();
}

fn probe_residual(c: &mut Criterion) {
    let grid = uniform_grid(256);
    let fam = TrigFamily::cancelling_pair(3, 2, 1.0, 0.2, 0.05);
    let laws = [ProbeLaw::newtonian()];
    c.bench_function("probe_residual_n3_k2", |b| b.iter(|| residual(black_box(&fam), &laws, &grid).unwrap()));
}

criterion_group!(benches, accelerations, integrators, probe_residual);
criterion_main!(benches);
