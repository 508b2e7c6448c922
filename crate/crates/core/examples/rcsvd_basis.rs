//! Randomized basis with an SRFT sketch, compared against the optimal one
//! for a few oversampling and power-iteration settings.

use std::time::Instant;

use symrom::bounds::projection_error;
use symrom::cli::commands::{generate_snapshots, randomized_basis_with_fallback};
use symrom::cli::config::{Method, ModelArgs, ModelSection};
use symrom::sketching::SketchConfig;
use symrom::symplectic::csvd;

fn main() -> symrom::Result<()> {
    let model = ModelArgs::default().resolve(&ModelSection::default())?;
    let xs = generate_snapshots(&model)?;
    let k = 20;

    let t = Instant::now();
    let best = projection_error(&xs, &csvd(&xs, k)?)?.frob;
    println!(
        "cSVD      k = {k}: error {best:.4e} in {:.3} s",
        t.elapsed().as_secs_f64()
    );

    for (p, q) in [(5, 0), (20, 0), (5, 1), (5, 2)] {
        let cfg = SketchConfig::new(k, p, q, 2024);
        let t = Instant::now();
        let omega = cfg.draw(xs.n_s())?;
        // plain power iterations can lose rank on fast-decaying spectra;
        // the helper retries with re-orthonormalization and says so
        let (basis, retried) = randomized_basis_with_fallback(&xs, Method::Rcsvd, &cfg, &omega)?;
        let secs = t.elapsed().as_secs_f64();
        let err = projection_error(&xs, &basis)?.frob;
        println!(
            "rcSVD p = {p:>2} q = {q}: error {err:.4e} ({:.3} x optimal) in {secs:.3} s{}",
            err / best,
            if retried { ", re-orthonormalized" } else { "" }
        );
    }
    Ok(())
}
