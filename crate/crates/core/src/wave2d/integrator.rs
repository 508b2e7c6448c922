use faer::linalg::solvers::{PartialPivLu, Solve};
use rayon::prelude::*;

use super::banded::BandedCholesky;
use super::system::{build_system, initial_state, HamiltonianOperator, LinearHamiltonianSystem, WaveStiffness};
use super::WaveModelConfig;
use crate::error::{Error, Result};
use crate::numerics::{Mat, RMat};
use crate::symplectic::SnapshotMatrix;

/// States of one time integration, one column per instant.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: RMat,
    pub hamiltonian: Vec<f64>,
}

impl Trajectory {
    pub fn state(&self, i: usize) -> Vec<f64> {
        self.states.col(i).iter().copied().collect()
    }

    /// `max_n |H(x_n) - H(x_0)| / |H(x_0)|` (absolute drift for zero energy).
    pub fn max_relative_drift(&self) -> f64 {
        let h0 = self.hamiltonian[0];
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        self.hamiltonian
            .iter()
            .map(|h| (h - h0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// One step of the implicit midpoint rule `x+ = (I - dt/2 A)^{-1} (I + dt/2 A) x`
/// with `A = J H`, factorized once.
pub enum ImplicitMidpoint {
    /// Wave structure `H = blkdiag(K, I)`: eliminating the momenta leaves
    /// `(I + dt^2/4 K) q+ = (I - dt^2/4 K) q + dt p` (symmetric positive
    /// definite and banded), then `p+ = p - dt/2 K (q + q+)`.
    Wave {
        k: WaveStiffness,
        chol: BandedCholesky,
        dt: f64,
    },
    Dense {
        lu: PartialPivLu<f64>,
        rhs: RMat,
    },
}

impl ImplicitMidpoint {
    pub fn new(sys: &LinearHamiltonianSystem, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::arg(format!("time step must be positive, got {dt}")));
        }
        match sys.operator() {
            HamiltonianOperator::Wave(k) => {
                let a = 0.25 * dt * dt;
                let chol = BandedCholesky::factor(k.dim(), k.bandwidth(), |i, j| {
                    let kij = a * k.entry(i, j);
                    if i == j {
                        1.0 + kij
                    } else {
                        kij
                    }
                })?;
                Ok(Self::Wave { k: k.clone(), chol, dt })
            }
            HamiltonianOperator::Dense(_) => {
                let a = sys.generator();
                let m = a.nrows();
                let lhs = Mat::from_fn(m, m, |i, j| if i == j { 1.0 } else { 0.0 } - 0.5 * dt * a[(i, j)]);
                let rhs = Mat::from_fn(m, m, |i, j| if i == j { 1.0 } else { 0.0 } + 0.5 * dt * a[(i, j)]);
                let lu = lhs.partial_piv_lu();
                let u = lu.U();
                let umax = (0..m).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
                if (0..m).any(|i| !(u[(i, i)].abs() > 1e-14 * umax)) {
                    return Err(Error::Solver("implicit midpoint matrix is singular".into()));
                }
                Ok(Self::Dense { lu, rhs })
            }
        }
    }

    pub fn step(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Wave { k, chol, dt } => {
                let n = k.dim();
                let (q, p) = x.split_at(n);
                let mut kq = vec![0.0; n];
                k.apply(q, &mut kq);
                let a = 0.25 * dt * dt;
                let mut qn: Vec<f64> = (0..n).map(|i| q[i] - a * kq[i] + dt * p[i]).collect();
                chol.solve_in_place(&mut qn);
                let sum: Vec<f64> = q.iter().zip(&qn).map(|(a, b)| a + b).collect();
                let mut ks = vec![0.0; n];
                k.apply(&sum, &mut ks);
                let mut out = qn;
                out.extend((0..n).map(|i| p[i] - 0.5 * dt * ks[i]));
                out
            }
            Self::Dense { lu, rhs } => {
                let m = x.len();
                let b = Mat::from_fn(m, 1, |i, _| (0..m).map(|j| rhs[(i, j)] * x[j]).sum::<f64>());
                let sol = lu.solve(&b);
                (0..m).map(|i| sol[(i, 0)]).collect()
            }
        }
    }
}

/// Integrates `x' = J H x` from `t0` to `t_end` with `nt` equal steps.
pub fn implicit_midpoint(
    sys: &LinearHamiltonianSystem,
    x0: &[f64],
    t0: f64,
    t_end: f64,
    nt: usize,
) -> Result<Trajectory> {
    if nt == 0 {
        return Err(Error::arg("nt must be at least 1"));
    }
    if x0.len() != 2 * sys.n_half() {
        return Err(Error::arg(format!(
            "initial state has length {}, system needs {}",
            x0.len(),
            2 * sys.n_half()
        )));
    }
    if !(t_end > t0) {
        return Err(Error::arg(format!("need t_end > t0, got [{t0}, {t_end}]")));
    }
    let dt = (t_end - t0) / nt as f64;
    let stepper = ImplicitMidpoint::new(sys, dt)?;
    let mut states = RMat::zeros(x0.len(), nt + 1);
    let mut hamiltonian = Vec::with_capacity(nt + 1);
    let mut x = x0.to_vec();
    for n in 0..=nt {
        if n > 0 {
            x = stepper.step(&x);
        }
        for (i, v) in x.iter().enumerate() {
            states[(i, n)] = *v;
        }
        hamiltonian.push(sys.energy(&x));
    }
    let times = (0..=nt).map(|n| t0 + dt * n as f64).collect();
    Ok(Trajectory {
        times,
        states,
        hamiltonian,
    })
}

/// Dense one-step map of the implicit midpoint rule, built column by column.
pub fn flow_map(sys: &LinearHamiltonianSystem, dt: f64) -> Result<RMat> {
    let stepper = ImplicitMidpoint::new(sys, dt)?;
    let m = 2 * sys.n_half();
    let mut phi = RMat::zeros(m, m);
    let mut e = vec![0.0; m];
    for j in 0..m {
        e[j] = 1.0;
        for (i, v) in stepper.step(&e).into_iter().enumerate() {
            phi[(i, j)] = v;
        }
        e[j] = 0.0;
    }
    Ok(phi)
}

/// Full-order trajectory of the wave model for its configured speed.
pub fn simulate(cfg: &WaveModelConfig) -> Result<Trajectory> {
    let sys = build_system(cfg)?;
    let x0 = initial_state(cfg)?;
    implicit_midpoint(&sys, &x0, cfg.t0, cfg.t_end(), cfg.nt)
}

/// Snapshot matrix over a list of wave speeds.
///
/// Each speed contributes `nt` columns: the states after steps `1..=nt`, or
/// after steps `0..nt` with `include_initial`. Columns are ordered by speed,
/// then by time. Speeds are integrated in parallel.
pub fn collect_snapshots(
    template: &WaveModelConfig,
    mu_values: &[f64],
    nt: usize,
    include_initial: bool,
) -> Result<SnapshotMatrix> {
    if mu_values.is_empty() {
        return Err(Error::arg("at least one parameter value is required"));
    }
    let trajectories: Vec<Trajectory> = mu_values
        .par_iter()
        .map(|&mu| {
            let cfg = WaveModelConfig {
                c: mu,
                nt,
                ..template.clone()
            };
            simulate(&cfg)
        })
        .collect::<Result<_>>()?;
    let rows = trajectories[0].states.nrows();
    let offset = usize::from(!include_initial);
    let data = Mat::from_fn(rows, nt * mu_values.len(), |i, j| {
        trajectories[j / nt].states[(i, j % nt + offset)]
    });
    SnapshotMatrix::new(data)
}
