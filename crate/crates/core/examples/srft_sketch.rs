//! Applies a subsampled randomized Fourier transform to a matrix and checks
//! it against the explicitly assembled sketch.

use symrom::numerics::{c64, frobenius, CMat};
use symrom::sketching::{srft_threshold, SrftSketch};

fn main() -> symrom::Result<()> {
    let (n, l) = (1000, 40);
    let s = SrftSketch::new(n, l, 7)?;
    let a = CMat::from_fn(5, n, |i, j| {
        c64::new(((i + 1) * j) as f64 / n as f64, (j as f64 * 0.01).cos())
    });

    let fast = s.apply(a.as_ref())?;
    let slow = &a * s.to_dense();
    println!("sketch {n} x {l}, scale sqrt(n/l) = {:.4}", s.scale());
    println!("first selected columns: {:?}", &s.selection()[..5]);
    println!(
        "FFT apply vs dense product: relative difference {:.2e}",
        frobenius((&fast - &slow).as_ref()) / frobenius(slow.as_ref())
    );
    for k in [10, 20, 40] {
        println!(
            "sketch size needed for the probabilistic guarantee at k = {k}: l >= {}",
            srft_threshold(k, n)?
        );
    }
    Ok(())
}
