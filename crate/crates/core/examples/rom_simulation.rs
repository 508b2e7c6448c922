//! Reduced-order simulation at the test speed for growing basis sizes.

use symrom::cli::commands::{generate_snapshots, rom_compare, truncate_basis};
use symrom::cli::config::{ModelArgs, ModelSection};
use symrom::symplectic::csvd;

fn main() -> symrom::Result<()> {
    let model = ModelArgs::default().resolve(&ModelSection::default())?;
    let xs = generate_snapshots(&model)?;
    let full = csvd(&xs, 50)?;
    println!("test speed mu = {}", model.mu_test);
    for k in [10, 20, 30, 40, 50] {
        let cmp = rom_compare(&model, &truncate_basis(&full, k)?, model.mu_test)?;
        println!(
            "k = {k:>2}: max error {:.3e}, time-integrated {:.3e}, ROM energy drift {:.1e}",
            cmp.max_error, cmp.integrated_error, cmp.rom_drift
        );
    }
    Ok(())
}
