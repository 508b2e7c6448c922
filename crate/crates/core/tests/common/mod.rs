//! Shared generators for the integration and acceptance tests.
#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use symrom::numerics::{c64, orthonormalize, CMat, RMat};
use symrom::rng;
use symrom::symplectic::SnapshotMatrix;

pub fn gaussian_snapshots(two_n: usize, n_s: usize, seed: u64) -> SnapshotMatrix {
    let mut r = rng::stream(seed, "test-gaussian", 0);
    SnapshotMatrix::new(RMat::from_fn(two_n, n_s, |_, _| r.sample(StandardNormal))).unwrap()
}

fn random_orthonormal(rows: usize, cols: usize, seed: u64, index: u64) -> CMat {
    let mut r = rng::stream(seed, "test-orthonormal", index);
    let g = CMat::from_fn(rows, cols, |_, _| {
        c64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    });
    orthonormalize(g.as_ref()).unwrap()
}

/// Snapshots whose complex matrix `X_c = U diag(sigma) V^H` has the given
/// singular values, with random unitary factors.
pub fn snapshots_with_spectrum(n_half: usize, n_s: usize, sigma: &[f64], seed: u64) -> SnapshotMatrix {
    let r = sigma.len();
    assert!(r <= n_half.min(n_s));
    let u = random_orthonormal(n_half, r, seed, 0);
    let v = random_orthonormal(n_s, r, seed, 1);
    let us = CMat::from_fn(n_half, r, |i, j| u[(i, j)] * sigma[j]);
    let xc = &us * v.adjoint();
    let q = RMat::from_fn(n_half, n_s, |i, j| xc[(i, j)].re);
    let p = RMat::from_fn(n_half, n_s, |i, j| xc[(i, j)].im);
    SnapshotMatrix::from_qp(q.as_ref(), p.as_ref()).unwrap()
}

/// Geometrically decaying spectrum `sigma_j = rate^(j-1)`.
pub fn geometric(count: usize, rate: f64) -> Vec<f64> {
    (0..count).map(|j| rate.powi(j as i32)).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
