//! Integrates the 2D wave model for one speed and prints the energy trace.

use symrom::wave2d::{build_system, simulate, WaveModelConfig};

fn main() -> symrom::Result<()> {
    let cfg = WaveModelConfig::desk().with_speed(1.2);
    let sys = build_system(&cfg)?;
    println!(
        "{} x {} grid, 2N = {}, {} steps to t = {}",
        cfg.n_xi1,
        cfg.n_xi2,
        2 * sys.n_half(),
        cfg.nt,
        cfg.t_end()
    );

    let traj = simulate(&cfg)?;
    for n in (0..=cfg.nt).step_by(cfg.nt / 5) {
        let x = traj.state(n);
        let amp = x[..sys.n_half()].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "t = {:6.3}  H = {:.12e}  max |q| = {amp:.4}",
            traj.times[n], traj.hamiltonian[n]
        );
    }
    println!("max relative energy drift {:.2e}", traj.max_relative_drift());
    Ok(())
}
