//! The randomized basis computed with real arithmetic only, next to the
//! complex route. Both should span the same space up to roundoff.

use symrom::bounds::projection_error;
use symrom::numerics::RMat;
use symrom::rng;
use symrom::sketching::SketchConfig;
use symrom::symplectic::{rcsvd_real_with_sketch, rcsvd_with_sketch, SnapshotMatrix};

use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> symrom::Result<()> {
    // low-rank snapshots with a clear spectral gap
    let (two_n, n_s, rank) = (80, 60, 12);
    let mut r = rng::stream(11, "example", 0);
    let a = RMat::from_fn(two_n, rank, |_, _| r.sample::<f64, _>(StandardNormal));
    let b = RMat::from_fn(rank, n_s, |_, _| r.sample::<f64, _>(StandardNormal));
    let xs = SnapshotMatrix::new(&a * &b)?;

    let cfg = SketchConfig::new(4, 6, 1, 5);
    let omega = cfg.draw(n_s)?;
    let complex = rcsvd_with_sketch(&xs, &cfg, &omega)?;
    let real = rcsvd_real_with_sketch(&xs, &cfg, &omega)?;

    let ec = projection_error(&xs, &complex)?.frob;
    let er = projection_error(&xs, &real)?.frob;
    let pc = complex.assemble() * complex.assemble().transpose();
    let pr = real.assemble() * real.assemble().transpose();
    let gap = symrom::numerics::frobenius((&pc - &pr).as_ref());
    println!("complex route error {ec:.6e}");
    println!("real route error    {er:.6e}");
    println!("||P_complex - P_real||_F = {gap:.2e}");
    Ok(())
}
