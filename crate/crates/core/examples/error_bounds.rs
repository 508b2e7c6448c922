//! Projection error of one randomized basis next to every a priori bound.

use symrom::bounds::{bound_report, SnapshotSvd};
use symrom::cli::commands::generate_snapshots;
use symrom::cli::config::{ModelArgs, ModelSection};
use symrom::sketching::SketchConfig;
use symrom::symplectic::rcsvd_with_sketch;

fn main() -> symrom::Result<()> {
    let model = ModelArgs::default().resolve(&ModelSection::default())?;
    let xs = generate_snapshots(&model)?;
    let svd = SnapshotSvd::compute(&xs)?;

    for p in [5, 20] {
        let cfg = SketchConfig::new(10, p, 0, 1);
        let omega = cfg.draw(xs.n_s())?;
        let basis = rcsvd_with_sketch(&xs, &cfg, &omega)?;
        let r = bound_report(&xs, &svd, &basis, &omega, &cfg)?;
        println!("k = {}, p_ovs = {p}, q = 0:", r.k);
        println!("  measured error     {:.4e} (optimal {:.4e})", r.e_proj_frob, r.tail);
        let show = |name: &str, eta: Option<f64>, eff: Option<f64>| match (eta, eff) {
            (Some(e), Some(f)) => println!("  {name:<18} {e:.4e}  effectivity {f:.3}"),
            _ => println!("  {name:<18} not evaluable"),
        };
        show("eta_det", r.eta_det, r.eff_det);
        show("eta_det_adv", r.eta_det_adv, r.eff_det_adv);
        show("eta_prob", Some(r.eta_prob), Some(r.eff_prob));
        show("eta_prob_adv", Some(r.eta_prob_adv), Some(r.eff_prob_adv));
        println!("  guarantee threshold met: {}", r.threshold_met);
    }
    Ok(())
}
