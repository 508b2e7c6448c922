use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::{c64, CMat, MatRef};

/// Replaces every row `r` by `r F` with `F` the unitary DFT,
/// `F[a][b] = n^{-1/2} exp(-2 pi i a b / n)`.
///
/// Any length is accepted; rustfft picks mixed-radix or Bluestein plans.
pub fn unitary_dft_rows(a: MatRef<'_, c64>) -> CMat {
    transform_rows(a, |p, n| p.plan_fft_forward(n))
}

/// Inverse of [`unitary_dft_rows`].
pub fn unitary_idft_rows(a: MatRef<'_, c64>) -> CMat {
    transform_rows(a, |p, n| p.plan_fft_inverse(n))
}

fn transform_rows(a: MatRef<'_, c64>, plan: impl Fn(&mut FftPlanner<f64>, usize) -> Arc<dyn Fft<f64>>) -> CMat {
    let (m, n) = (a.nrows(), a.ncols());
    let mut out = CMat::zeros(m, n);
    if n == 0 {
        return out;
    }
    let mut planner = FftPlanner::new();
    let fft = plan(&mut planner, n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut buf = vec![c64::new(0.0, 0.0); n];
    let mut scratch = vec![c64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for i in 0..m {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = a[(i, j)];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (j, b) in buf.iter().enumerate() {
            out[(i, j)] = *b * scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::frobenius;
    use crate::rng;
    use rand::Rng;
    use rand_distr::StandardNormal;
    use std::f64::consts::PI;

    fn dense_dft(n: usize) -> CMat {
        let s = 1.0 / (n as f64).sqrt();
        CMat::from_fn(n, n, |a, b| {
            let ang = -2.0 * PI * ((a * b) % n) as f64 / n as f64;
            c64::new(ang.cos(), ang.sin()) * s
        })
    }

    #[test]
    fn impulse_maps_to_constant_row() {
        for n in [1, 5, 8, 12] {
            let a = CMat::from_fn(
                1,
                n,
                |_, j| if j == 0 { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) },
            );
            let f = unitary_dft_rows(a.as_ref());
            let expect = 1.0 / (n as f64).sqrt();
            for j in 0..n {
                assert!((f[(0, j)] - c64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_dense_matrix_and_round_trips() {
        for n in [8, 30, 97] {
            let mut r = rng::stream(n as u64, "dft-test", 0);
            let a = CMat::from_fn(3, n, |_, _| {
                c64::new(r.sample(StandardNormal), r.sample(StandardNormal))
            });
            let fast = unitary_dft_rows(a.as_ref());
            let dense = &a * &dense_dft(n);
            let norm = frobenius(a.as_ref());
            assert!(frobenius((&fast - &dense).as_ref()) <= 1e-12 * norm);
            assert!((frobenius(fast.as_ref()) - norm).abs() <= 1e-12 * norm);
            let back = unitary_idft_rows(fast.as_ref());
            assert!(frobenius((&back - &a).as_ref()) <= 1e-12 * norm);
        }
    }
}
