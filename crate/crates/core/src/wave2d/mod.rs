//! Two-dimensional linear wave equation as a Hamiltonian benchmark.
//!
//! `u_tt = c^2 (u_11 + u_22)` on a rectangle with zero Dirichlet data is
//! discretized by central differences at the interior nodes (`xi1` index
//! fastest). With `q = u` and `p = u_t` this gives `x' = J H x` with
//! `H = blkdiag(c^2 K, I)`, integrated by the implicit midpoint rule, which
//! preserves the quadratic energy `x^T H x / 2` up to solver roundoff.

mod banded;
mod config;
mod integrator;
mod system;

pub use banded::BandedCholesky;
pub use config::{default_mu_values, GridConvention, WaveModelConfig};
pub use integrator::{collect_snapshots, flow_map, implicit_midpoint, simulate, ImplicitMidpoint, Trajectory};
pub use system::{
    build_system, bump_dh, bump_h, initial_state, reduce, HamiltonianOperator, LinearHamiltonianSystem, WaveStiffness,
};
