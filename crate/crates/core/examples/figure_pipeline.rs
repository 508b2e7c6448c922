//! Runs a small sweep end to end and writes the plot tables.
//!
//! `cargo run --release --example figure_pipeline -- <dir>` (default
//! `results/example`).

use std::path::PathBuf;

use symrom::cli::commands::{cmd_bench, cmd_bounds, cmd_snapshots, SNAPSHOT_FILE};
use symrom::cli::config::{Method, ModelArgs, ModelSection, Oversampling, SweepSpec};
use symrom::cli::figures::cmd_figures;
use symrom::sketching::SketchKind;

fn main() -> symrom::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "results/example".into());
    std::fs::create_dir_all(&dir)?;

    let model = ModelArgs::default().resolve(&ModelSection::default())?;
    let (_, xs) = cmd_snapshots(&model, &dir.join(SNAPSHOT_FILE))?;
    let spec = SweepSpec {
        k: vec![10, 20],
        p_ovs: vec![Oversampling::Fixed(5), Oversampling::Fixed(20)],
        q_pow: vec![0, 1],
        seeds: vec![1, 2],
        s: 0,
        method: Method::Rcsvd,
        sketch: SketchKind::Srft,
        stabilize: false,
        repeat: 1,
    };
    let (rows, skipped) = cmd_bounds(&xs, &spec, &dir)?;
    cmd_bench(&xs, &spec, &dir)?;
    println!("{} bound rows, {} cells skipped", rows.len(), skipped.len());
    for p in cmd_figures(&dir, &dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
