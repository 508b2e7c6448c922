//! Real-arithmetic formulation of the randomized basis.
//!
//! With `Y_s = [X_s, J^T X_s] = [Q, -P; P, Q]` and the real block sketch
//! `Omega~ = [Re W, -Im W; Im W, Re W]` (`W` the complex sketch), the
//! sketched extended matrix `Z = Y_s (Y_s^T Y_s)^q Omega~` equals
//! `[[Re Y; Im Y], J^T [Re Y; Im Y]]` for the complex sketch `Y`. Everything
//! the complex route does can therefore be replayed with real matrices that
//! are twice as large in each direction.

use super::{relative_gap, OrthoSymplecticBasis, PoissonOperator, SnapshotMatrix, GAP_RTOL, RANK_RTOL};
use crate::error::{Error, Result};
use crate::numerics::{c64, qr, svd, CMat, Mat, MatRef, RMat};
use crate::sketching::{Sketch, SketchConfig};

/// `Y_s = [X_s, J^T X_s]`, of size `2N x 2 n_s`.
pub fn extended_snapshots(xs: &SnapshotMatrix) -> RMat {
    let x = xs.data();
    let jx = PoissonOperator::new(xs.n_half()).apply_transpose(x);
    let n_s = xs.n_s();
    Mat::from_fn(
        x.nrows(),
        2 * n_s,
        |i, j| if j < n_s { x[(i, j)] } else { jx[(i, j - n_s)] },
    )
}

/// `Omega~ = [Re W, -Im W; Im W, Re W]`, of size `2 n_s x 2 l`.
pub fn real_sketch(omega: &Sketch) -> RMat {
    let w = omega.to_dense();
    let (n, l) = (w.nrows(), w.ncols());
    Mat::from_fn(2 * n, 2 * l, |i, j| {
        let z = w[(i % n, j % l)];
        match (i < n, j < l) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// `Z = Y_s (Y_s^T Y_s)^q Omega~`. In stabilized mode every product is
/// followed by a thin QR, mirroring [`crate::sketching::power_sketch`].
pub fn sketched_extended(xs: &SnapshotMatrix, omega: &Sketch, q_pow: usize, stabilize: bool) -> Result<RMat> {
    if omega.n() != xs.n_s() {
        return Err(Error::arg(format!(
            "sketch has {} rows but there are {} snapshots",
            omega.n(),
            xs.n_s()
        )));
    }
    let ys = extended_snapshots(xs);
    let mut z = &ys * real_sketch(omega);
    if stabilize {
        z = qr(z.as_ref())?.q;
    }
    for _ in 0..q_pow {
        let mut w = ys.transpose() * &z;
        if stabilize {
            w = qr(w.as_ref())?.q;
        }
        z = &ys * &w;
        if stabilize {
            z = qr(z.as_ref())?.q;
        }
    }
    Ok(z)
}

/// Randomized basis computed in real arithmetic only.
pub fn rcsvd_real(xs: &SnapshotMatrix, cfg: &SketchConfig) -> Result<OrthoSymplecticBasis> {
    cfg.validate(xs.n_half(), xs.n_s())?;
    let omega = cfg.draw(xs.n_s())?;
    rcsvd_real_with_sketch(xs, cfg, &omega)
}

/// Real counterpart of [`super::rcsvd_with_sketch`].
///
/// The left singular vectors `W` of `Z` span the realification of the
/// complex sketch range. Projecting the extended snapshots onto it,
/// `B~ = W^T Y_s`, and keeping the leading `2k` left singular vectors of `B~`
/// reproduces the second small SVD of the complex route. The selected
/// subspace is invariant under `J`, and an ortho-symplectic basis of it is
/// extracted at the end.
///
/// Singular values of `B~` come in equal pairs, so the truncation at `2k`
/// needs a relative gap of at least `1e-8` between `sigma_2k` and
/// `sigma_2k+1`; a smaller gap is reported as an error.
pub fn rcsvd_real_with_sketch(xs: &SnapshotMatrix, cfg: &SketchConfig, omega: &Sketch) -> Result<OrthoSymplecticBasis> {
    cfg.validate(xs.n_half(), xs.n_s())?;
    check_sketch(xs, cfg, omega)?;
    let k2 = 2 * cfg.k;
    let z = sketched_extended(xs, omega, cfg.q_pow, cfg.stabilize)?;
    let fz = svd(z.as_ref())?;
    let rank = fz.numerical_rank(RANK_RTOL);
    if rank < k2 {
        return Err(Error::Rank {
            context: "sketched extended snapshots Z",
            rank,
            requested: k2,
        });
    }
    let w = fz.truncate(rank).u;
    let b = w.transpose() * extended_snapshots(xs);
    let fb = svd(b.as_ref())?;
    let gap = relative_gap(&fb.sigma, k2);
    if gap < GAP_RTOL {
        return Err(Error::Gap {
            context: "projected extended snapshots",
            index: k2,
            gap,
            threshold: GAP_RTOL,
        });
    }
    let u = &w * fb.u.subcols(0, k2);
    symplectic_basis_of_span(u.as_ref(), cfg.k)
}

/// The literal route `POD(Z, 2k)`, followed by symplectic extraction.
///
/// It agrees with [`rcsvd_real_with_sketch`] when `p_ovs = 0`. With
/// oversampling it instead truncates the sketch range directly, skipping the
/// second small SVD.
pub fn sketched_pod(xs: &SnapshotMatrix, cfg: &SketchConfig, omega: &Sketch) -> Result<OrthoSymplecticBasis> {
    cfg.validate(xs.n_half(), xs.n_s())?;
    check_sketch(xs, cfg, omega)?;
    let k2 = 2 * cfg.k;
    let z = sketched_extended(xs, omega, cfg.q_pow, cfg.stabilize)?;
    let fz = svd(z.as_ref())?;
    if fz.numerical_rank(RANK_RTOL) < k2 {
        return Err(Error::Rank {
            context: "sketched extended snapshots Z",
            rank: fz.numerical_rank(RANK_RTOL),
            requested: k2,
        });
    }
    let gap = relative_gap(&fz.sigma, k2);
    if gap < GAP_RTOL {
        return Err(Error::Gap {
            context: "sketched extended snapshots Z",
            index: k2,
            gap,
            threshold: GAP_RTOL,
        });
    }
    symplectic_basis_of_span(fz.u.subcols(0, k2), cfg.k)
}

fn check_sketch(xs: &SnapshotMatrix, cfg: &SketchConfig, omega: &Sketch) -> Result<()> {
    if omega.n() != xs.n_s() || omega.l() != cfg.l() {
        return Err(Error::arg(format!(
            "sketch is {}x{}, expected {}x{}",
            omega.n(),
            omega.l(),
            xs.n_s(),
            cfg.l()
        )));
    }
    Ok(())
}

/// Ortho-symplectic basis of the span of `u` (`2N x 2k`, orthonormal
/// columns), which must be invariant under `J`.
///
/// Writing each column `[a; b]` as `a + ib` turns a `J`-invariant real
/// subspace of dimension `2k` into a complex subspace of dimension `k`; the
/// complex matrix then has exactly `k` nonzero singular values (all `sqrt 2`),
/// and its leading left singular vectors map back to the required basis.
fn symplectic_basis_of_span(u: MatRef<'_, f64>, k: usize) -> Result<OrthoSymplecticBasis> {
    let n = u.nrows() / 2;
    let c = CMat::from_fn(n, u.ncols(), |i, j| c64::new(u[(i, j)], u[(i + n, j)]));
    let f = svd(c.as_ref())?;
    let leak = f.sigma.get(k).copied().unwrap_or(0.0) / f.sigma[0];
    if leak > 1e-6 {
        return Err(Error::Structure(format!(
            "selected real subspace is not invariant under J (relative leak {leak:.3e})"
        )));
    }
    OrthoSymplecticBasis::from_complex(f.u.subcols(0, k))
}
