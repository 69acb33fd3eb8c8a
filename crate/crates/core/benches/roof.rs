use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gcs_core::classicality::{detector_scale, f1_roof_exact_batch, f1_roof_upper_bound_with, DensityMatrix, RoofSearch};
use gcs_core::detector::extract_theta;
use gcs_core::repkit::{build_representation, RepSpec};
use gcs_core::symdecomp::{decompose_representation, SymmetricEmbedding};
use gcs_core::Exec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn exact_batch(c: &mut Criterion) {
    let rep = build_representation(&RepSpec::Spin7Spinor).unwrap();
    let dec = decompose_representation(&rep, 1e-8).unwrap();
    let theta = extract_theta(&dec, &SymmetricEmbedding::new(8), 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let states: Vec<DensityMatrix> = (0..512).map(|_| DensityMatrix::random_hs(8, &mut rng)).collect();

    let mut group = c.benchmark_group("exact_roof_batch_spin7");
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| f1_roof_exact_batch(black_box(&states), &theta, detector_scale(8), exec).unwrap())
        });
    }
    group.finish();
}

fn upper_bound(c: &mut Criterion) {
    let rep = build_representation(&RepSpec::Su2 { two_s: 3 }).unwrap();
    let dec = decompose_representation(&rep, 1e-8).unwrap();
    let emb = SymmetricEmbedding::new(4);
    let rho = DensityMatrix::random_hs(4, &mut ChaCha8Rng::seed_from_u64(1));
    let opts = RoofSearch { iters: 100, restarts: 8, ..Default::default() };

    let mut group = c.benchmark_group("upper_bound_spin3_2");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| f1_roof_upper_bound_with(black_box(&rho), &dec, &emb, &opts, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact_batch, upper_bound);
criterion_main!(benches);
