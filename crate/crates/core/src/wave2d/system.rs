use super::WaveModelConfig;
use crate::error::{Error, Result};
use crate::numerics::{Mat, MatRef, RMat};
use crate::symplectic::{OrthoSymplecticBasis, PoissonOperator};

/// Piecewise cubic bump: `1 - 3/2 s^2 + 3/4 s^3` on `[0, 1]`,
/// `(2 - s)^3 / 4` on `(1, 2]`, zero beyond.
pub fn bump_h(s: f64) -> f64 {
    if s <= 1.0 {
        1.0 - 1.5 * s * s + 0.75 * s * s * s
    } else if s <= 2.0 {
        0.25 * (2.0 - s).powi(3)
    } else {
        0.0
    }
}

/// Derivative of [`bump_h`]: `-3s + 9/4 s^2` on `[0, 1]`,
/// `-3/4 (2 - s)^2` on `(1, 2]`, zero beyond.
pub fn bump_dh(s: f64) -> f64 {
    if s <= 1.0 {
        -3.0 * s + 2.25 * s * s
    } else if s <= 2.0 {
        -0.75 * (2.0 - s).powi(2)
    } else {
        0.0
    }
}

/// Initial state `[u0; v0]` at the interior nodes: a bump in `xi2` moving
/// towards larger `xi2` with speed `c`.
pub fn initial_state(cfg: &WaveModelConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = cfg.n_dof();
    let mut x = vec![0.0; 2 * n];
    let shift = cfg.bump_center_offset / 2.0 - cfg.u0_sup / 2.0;
    let slope = 4.0 * cfg.c / cfg.u0_sup;
    for idx in 0..n {
        let (_, xi2) = cfg.node(idx);
        let arg = xi2 + shift;
        let s = 4.0 * (arg / cfg.u0_sup).abs();
        x[idx] = bump_h(s);
        x[n + idx] = if arg >= 0.0 {
            -slope * bump_dh(s)
        } else {
            slope * bump_dh(s)
        };
    }
    Ok(x)
}

/// The five-point Dirichlet Laplacian stencil on an `m1 x m2` interior grid,
/// scaled by `mu^2`: `K = mu^2 (D_11 + D_22)` with `D` the second-difference
/// matrices (`2` on the diagonal, `-1` off it, divided by the squared spacing).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveStiffness {
    pub m1: usize,
    pub m2: usize,
    pub inv_d1_sq: f64,
    pub inv_d2_sq: f64,
    pub mu_sq: f64,
}

impl WaveStiffness {
    pub fn dim(&self) -> usize {
        self.m1 * self.m2
    }

    /// Half bandwidth in the `xi1`-fastest ordering.
    pub fn bandwidth(&self) -> usize {
        if self.m2 > 1 {
            self.m1
        } else {
            1
        }
    }

    /// Entry `K[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let m1 = self.m1;
        let (a1, a2) = (i % m1, i / m1);
        let (b1, b2) = (j % m1, j / m1);
        let v = if i == j {
            2.0 * self.inv_d1_sq + 2.0 * self.inv_d2_sq
        } else if a2 == b2 && a1.abs_diff(b1) == 1 {
            -self.inv_d1_sq
        } else if a1 == b1 && a2.abs_diff(b2) == 1 {
            -self.inv_d2_sq
        } else {
            0.0
        };
        self.mu_sq * v
    }

    /// `out = K x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let (m1, m2) = (self.m1, self.m2);
        let (c1, c2) = (self.mu_sq * self.inv_d1_sq, self.mu_sq * self.inv_d2_sq);
        for i2 in 0..m2 {
            for i1 in 0..m1 {
                let idx = i2 * m1 + i1;
                let mut v = 2.0 * (c1 + c2) * x[idx];
                if i1 > 0 {
                    v -= c1 * x[idx - 1];
                }
                if i1 + 1 < m1 {
                    v -= c1 * x[idx + 1];
                }
                if i2 > 0 {
                    v -= c2 * x[idx - m1];
                }
                if i2 + 1 < m2 {
                    v -= c2 * x[idx + m1];
                }
                out[idx] = v;
            }
        }
    }

    pub fn to_dense(&self) -> RMat {
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.entry(i, j))
    }
}

/// Storage of the symmetric matrix `H`.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianOperator {
    /// `H = blkdiag(K, I)` with the structured stiffness `K`.
    Wave(WaveStiffness),
    Dense(RMat),
}

/// `x' = J H x` with symmetric `H` and Hamiltonian `x^T H x / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearHamiltonianSystem {
    n: usize,
    mu: f64,
    op: HamiltonianOperator,
}

impl LinearHamiltonianSystem {
    /// Wraps a dense symmetric `H` of even size.
    pub fn from_dense(h: RMat, mu: f64) -> Result<Self> {
        if h.nrows() != h.ncols() || !h.nrows().is_multiple_of(2) || h.nrows() == 0 {
            return Err(Error::arg(format!(
                "H must be square of even size, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        crate::numerics::ensure_finite(h.as_ref())?;
        for j in 0..h.ncols() {
            for i in 0..j {
                if h[(i, j)] != h[(j, i)] {
                    return Err(Error::arg("H must be exactly symmetric"));
                }
            }
        }
        Ok(Self {
            n: h.nrows() / 2,
            mu,
            op: HamiltonianOperator::Dense(h),
        })
    }

    pub fn n_half(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn operator(&self) -> &HamiltonianOperator {
        &self.op
    }

    /// `H x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), 2 * self.n, "state length does not match the system");
        match &self.op {
            HamiltonianOperator::Wave(k) => {
                let mut out = vec![0.0; 2 * self.n];
                k.apply(&x[..self.n], &mut out[..self.n]);
                out[self.n..].copy_from_slice(&x[self.n..]);
                out
            }
            HamiltonianOperator::Dense(h) => (0..2 * self.n)
                .map(|i| (0..2 * self.n).map(|j| h[(i, j)] * x[j]).sum())
                .collect(),
        }
    }

    /// `x^T H x / 2`.
    pub fn energy(&self, x: &[f64]) -> f64 {
        0.5 * self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn to_dense(&self) -> RMat {
        match &self.op {
            HamiltonianOperator::Dense(h) => h.clone(),
            HamiltonianOperator::Wave(k) => {
                let n = self.n;
                Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                    (true, true) => k.entry(i, j),
                    (false, false) if i == j => 1.0,
                    _ => 0.0,
                })
            }
        }
    }

    /// `H V` for a block of column vectors.
    pub fn apply_block(&self, v: MatRef<'_, f64>) -> RMat {
        let mut out = RMat::zeros(v.nrows(), v.ncols());
        let mut col = vec![0.0; v.nrows()];
        for j in 0..v.ncols() {
            for (i, c) in col.iter_mut().enumerate() {
                *c = v[(i, j)];
            }
            for (i, val) in self.apply(&col).into_iter().enumerate() {
                out[(i, j)] = val;
            }
        }
        out
    }

    /// Dense `J H`.
    pub fn generator(&self) -> RMat {
        PoissonOperator::new(self.n).apply(self.to_dense().as_ref())
    }
}

/// Assembles `H(mu) = blkdiag(mu^2 (D_11 + D_22), I)` for the configured grid.
pub fn build_system(cfg: &WaveModelConfig) -> Result<LinearHamiltonianSystem> {
    cfg.validate()?;
    let (m1, m2) = cfg.interior();
    let (d1, d2) = cfg.spacing();
    let k = WaveStiffness {
        m1,
        m2,
        inv_d1_sq: 1.0 / (d1 * d1),
        inv_d2_sq: 1.0 / (d2 * d2),
        mu_sq: cfg.c * cfg.c,
    };
    Ok(LinearHamiltonianSystem {
        n: k.dim(),
        mu: cfg.c,
        op: HamiltonianOperator::Wave(k),
    })
}

/// Galerkin reduction `H_r = V^T H V`, symmetrized to remove roundoff.
pub fn reduce(sys: &LinearHamiltonianSystem, basis: &OrthoSymplecticBasis) -> Result<LinearHamiltonianSystem> {
    if basis.n_half() != sys.n_half() {
        return Err(Error::arg(format!(
            "basis half dimension {} does not match the system ({})",
            basis.n_half(),
            sys.n_half()
        )));
    }
    let v = basis.assemble();
    let hv = sys.apply_block(v.as_ref());
    let hr = v.transpose() * &hv;
    let sym = Mat::from_fn(hr.nrows(), hr.ncols(), |i, j| 0.5 * (hr[(i, j)] + hr[(j, i)]));
    LinearHamiltonianSystem::from_dense(sym, sys.mu())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave2d::GridConvention;

    #[test]
    fn bump_values() {
        assert_eq!(bump_h(0.0), 1.0);
        // both branches meet at s = 1
        assert_eq!(bump_h(1.0), 0.25);
        assert!((bump_h(1.0 + 1e-12) - 0.25).abs() < 1e-11);
        assert_eq!(bump_h(3.0), 0.0);
        assert_eq!(bump_dh(0.0), 0.0);
        assert_eq!(bump_dh(1.0), -0.75);
        assert!((bump_dh(1.0 + 1e-12) + 0.75).abs() < 1e-11);
        assert_eq!(bump_dh(2.5), 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for i in 0..1000 {
            let s = h + 2.6 * i as f64 / 1000.0;
            let fd = (bump_h(s + h) - bump_h(s - h)) / (2.0 * h);
            assert!((fd - bump_dh(s)).abs() <= 1e-6, "s = {s}");
        }
    }

    fn centred(n_xi2: usize) -> WaveModelConfig {
        WaveModelConfig {
            n_xi1: 3,
            n_xi2,
            grid: GridConvention::InteriorOnly,
            bump_center_offset: 0.0,
            ..WaveModelConfig::desk()
        }
    }

    #[test]
    fn initial_state_shape() {
        // offset 0 centres the bump at xi2 = 1; node 19 of 59 sits there (spacing 0.05)
        let cfg = centred(59);
        let x = initial_state(&cfg).unwrap();
        let n = cfg.n_dof();
        let centre = 19 * 3;
        assert!((cfg.node(centre).1 - 1.0).abs() < 1e-14);
        assert!((x[centre] - 1.0).abs() < 1e-14 && x[n + centre].abs() < 1e-14);
        for idx in 0..n {
            if cfg.node(idx).1 > 2.0 {
                assert_eq!((x[idx], x[n + idx]), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn peak_converges_under_refinement() {
        for n2 in [30, 61, 122, 301] {
            let cfg = centred(n2);
            let x = initial_state(&cfg).unwrap();
            let peak = x[..cfg.n_dof()].iter().cloned().fold(0.0, f64::max);
            assert!((peak - 1.0).abs() <= 1.0 / n2 as f64, "n2 = {n2}: {peak}");
        }
    }

    #[test]
    fn operator_is_symmetric_and_scales_with_mu() {
        let cfg = WaveModelConfig {
            n_xi1: 4,
            n_xi2: 5,
            ..WaveModelConfig::desk()
        };
        let h = build_system(&cfg).unwrap().to_dense();
        assert!(h == h.transpose().to_owned());
        let k1 = build_system(&cfg).unwrap();
        let k2 = build_system(&cfg.with_speed(2.0)).unwrap();
        let (HamiltonianOperator::Wave(a), HamiltonianOperator::Wave(b)) = (k1.operator(), k2.operator()) else {
            unreachable!()
        };
        assert!(b.to_dense() == &a.to_dense() * 4.0);
        // the stencil application agrees with the dense matrix
        let x: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).cos()).collect();
        let hx = k1.apply(&x);
        for i in 0..40 {
            let d: f64 = (0..40).map(|j| h[(i, j)] * x[j]).sum();
            assert!((d - hx[i]).abs() <= 1e-10 * d.abs().max(1.0));
        }
    }

    #[test]
    fn one_dimensional_slice_has_the_analytic_spectrum() {
        // a single interior row in xi1 adds the constant 2/d1^2
        let cfg = WaveModelConfig {
            n_xi1: 3,
            n_xi2: 40,
            grid: GridConvention::IncludesBoundary,
            ..WaveModelConfig::desk()
        };
        let sys = build_system(&cfg).unwrap();
        let HamiltonianOperator::Wave(k) = sys.operator() else {
            unreachable!()
        };
        let (d1, d2) = cfg.spacing();
        let m = k.m2;
        let mut eig: Vec<f64> = k.to_dense().self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        eig.sort_by(f64::total_cmp);
        let mut exact: Vec<f64> = (1..=m)
            .map(|j| {
                2.0 / (d1 * d1) + 2.0 / (d2 * d2) * (1.0 - (std::f64::consts::PI * j as f64 / (m + 1) as f64).cos())
            })
            .collect();
        exact.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&exact) {
            assert!((a - b).abs() <= 1e-10 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn identity_reduction_is_exact() {
        let cfg = WaveModelConfig {
            n_xi1: 3,
            n_xi2: 4,
            grid: GridConvention::InteriorOnly,
            ..WaveModelConfig::desk()
        };
        let sys = build_system(&cfg).unwrap();
        let n = sys.n_half();
        let basis = OrthoSymplecticBasis::from_blocks(RMat::identity(n, n), RMat::zeros(n, n), 1e-14).unwrap();
        let red = reduce(&sys, &basis).unwrap();
        assert!(red.to_dense() == sys.to_dense());
    }
}
