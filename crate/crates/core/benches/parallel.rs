//! Sequential vs. data-parallel execution on the batch workloads.
//!
//! Build with `--no-default-features` to see the fallback: both modes then
//! run sequentially.

use std::hint::black_box;

use ciwb_core::k0_models::a_model;
use ciwb_core::lambda_ring::{gamma_filtration, whitney_batch, K0Class};
use ciwb_core::patching::{patch_module, sampled_ranks, universal_gluing};
use ciwb_core::sample::DEFAULT_SEED;
use ciwb_core::{Execution, Ideal, Polynomial, RingPresentation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ranks(c: &mut Criterion) {
    let p = patch_module(&universal_gluing(3).unwrap()).unwrap();
    let mut group = c.benchmark_group("sampled_ranks_a3_64");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(sampled_ranks(&p, 64, DEFAULT_SEED, exec).unwrap()))
        });
    }
    group.finish();
}

fn minors(c: &mut Criterion) {
    let p = patch_module(&universal_gluing(2).unwrap()).unwrap();
    let mut group = c.benchmark_group("minors_a2_3x3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(p.idempotent.minors(3, exec).unwrap()))
        });
    }
    group.finish();
}

fn membership(c: &mut Criterion) {
    let pres = RingPresentation::parse("Q[x,y,z]", &[]).unwrap();
    let ideal = Ideal::parse(&pres, &["x^2*y - z^3", "x*y^2 - y*z + 1", "x^3 - x*z^2"]).unwrap();
    ideal.basis().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let vars = ["x", "y", "z"];
    let probes: Vec<Polynomial> = (0..256)
        .map(|_| {
            let terms: Vec<String> = (0..4)
                .map(|_| {
                    let e: Vec<String> = vars.iter().map(|v| format!("{v}^{}", rng.gen_range(0..5))).collect();
                    format!("{}*{}", rng.gen_range(-9..=9), e.join("*"))
                })
                .collect();
            pres.parse_poly(&terms.join(" + ")).unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("membership_256");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(ideal.contains_all(&probes, exec).unwrap()))
        });
    }
    group.finish();
}

fn whitney(c: &mut Criterion) {
    let m = a_model(4).unwrap();
    let f = gamma_filtration(&m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut class = || m.class(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6)]).unwrap();
    let pairs: Vec<(K0Class, K0Class)> = (0..200).map(|_| (class(), class())).collect();
    let mut group = c.benchmark_group("whitney_a4_200");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(whitney_batch(&pairs, &f, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, ranks, minors, membership, whitney);
criterion_main!(benches);
