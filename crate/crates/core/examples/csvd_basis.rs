//! Optimal ortho-symplectic basis of a wave-model snapshot set.
//!
//! Run with `cargo run --release --example csvd_basis`.

use symrom::bounds::{optimal_tail, projection_error, SnapshotSvd};
use symrom::cli::commands::generate_snapshots;
use symrom::cli::config::{ModelArgs, ModelSection};
use symrom::symplectic::{check_structure, csvd};

fn main() -> symrom::Result<()> {
    let model = ModelArgs::default().resolve(&ModelSection::default())?;
    let xs = generate_snapshots(&model)?;
    println!("snapshots: 2N = {}, n_s = {}", 2 * xs.n_half(), xs.n_s());

    let svd = SnapshotSvd::compute(&xs)?;
    for k in [5, 10, 20, 40] {
        let basis = csvd(&xs, k)?;
        let s = check_structure(&basis, 1e-10 * ((2 * k) as f64).sqrt());
        let err = projection_error(&xs, &basis)?;
        println!(
            "k = {k:>2}: error {:.4e} (optimal tail {:.4e}), orthonormality {:.1e}, symplecticity {:.1e}",
            err.frob,
            optimal_tail(svd.spectrum(), k)?,
            s.orthonormality_defect,
            s.symplecticity_defect
        );
    }
    Ok(())
}
