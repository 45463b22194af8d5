use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ergotime::ergodization::is_delta_dense;
use ergotime::lattice::{hnf, IntMatrix};
use ergotime::rational::{int, ratio, Rational};
use ergotime::resonance::{analyze, psi, ResonanceData};
use ergotime::scalars::{BasisConstant, ConstantSet, RealScalar};

fn sqrt_vector(radicands: &[u64]) -> ResonanceData {
    let mut c = vec![BasisConstant::one("1")];
    for &m in radicands {
        c.push(BasisConstant::sqrt(&format!("s{m}"), m).unwrap());
    }
    let set = Arc::new(ConstantSet::new(c).unwrap());
    let v = (0..set.len())
        .map(|i| {
            let mut coeffs = vec![Rational::from_integer(0.into()); set.len()];
            coeffs[i] = int(1);
            RealScalar::from_coeffs(&set, coeffs).unwrap()
        })
        .collect();
    analyze(v).unwrap()
}

fn bench_psi(c: &mut Criterion) {
    let r2 = sqrt_vector(&[2]);
    let r3 = sqrt_vector(&[2, 3]);
    c.bench_function("psi (1,s2) Q=256", |b| b.iter(|| psi(&r2, black_box(&int(256))).unwrap()));
    c.bench_function("psi (1,s2,s3) Q=32", |b| b.iter(|| psi(&r3, black_box(&int(32))).unwrap()));
}

fn bench_hnf(c: &mut Criterion) {
    let rows: Vec<Vec<i64>> = (0..6)
        .map(|i| (0..8).map(|j| ((i * 7 + j * 13) % 19) as i64 - 9).collect())
        .collect();
    let m = IntMatrix::from_i64(&rows).unwrap();
    c.bench_function("hnf 6x8", |b| b.iter(|| hnf(black_box(&m))));
}

fn bench_density(c: &mut Criterion) {
    let r = sqrt_vector(&[2]);
    let delta = ratio(1, 8);
    let eps = ratio(1, 64);
    c.bench_function("is_delta_dense (1,s2) T=8 delta=1/8", |b| {
        b.iter(|| is_delta_dense(&r, black_box(&int(8)), &delta, &eps).unwrap())
    });
}

criterion_group!(kernels, bench_psi, bench_hnf, bench_density);
criterion_main!(kernels);
