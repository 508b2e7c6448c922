use super::{OrthoSymplecticBasis, SnapshotMatrix, RANK_RTOL};
use crate::error::{Error, Result};
use crate::numerics::svd;
use crate::sketching::{power_sketch, Sketch, SketchConfig};

/// Randomized counterpart of [`super::csvd`].
///
/// Draws the sketch described by `cfg` and calls [`rcsvd_with_sketch`].
pub fn rcsvd(xs: &SnapshotMatrix, cfg: &SketchConfig) -> Result<OrthoSymplecticBasis> {
    cfg.validate(xs.n_half(), xs.n_s())?;
    let omega = cfg.draw(xs.n_s())?;
    rcsvd_with_sketch(xs, cfg, &omega)
}

/// Randomized basis from a given sketch `omega` (`n_s x l`).
///
/// 1. `Y = X_c (X_c^H X_c)^q Omega` and its SVD `U_Y`;
/// 2. `B = U_Y^H X_c` and its SVD `U_B`;
/// 3. `U = U_Y U_B(:, 1:k)`, split into real and imaginary parts.
///
/// The second, small SVD keeps the best rank-`k` part of the sketched range
/// rather than truncating `U_Y` directly. Columns of `U_Y` whose singular
/// value falls below `1e-14 sigma_1(Y)` are dropped; fewer than `k` survivors
/// is a rank error.
pub fn rcsvd_with_sketch(xs: &SnapshotMatrix, cfg: &SketchConfig, omega: &Sketch) -> Result<OrthoSymplecticBasis> {
    cfg.validate(xs.n_half(), xs.n_s())?;
    if omega.n() != xs.n_s() || omega.l() != cfg.l() {
        return Err(Error::arg(format!(
            "sketch is {}x{}, expected {}x{}",
            omega.n(),
            omega.l(),
            xs.n_s(),
            cfg.l()
        )));
    }
    let xc = xs.complexify();
    let y = power_sketch(xc.as_ref(), omega, cfg.q_pow, cfg.stabilize)?;
    let fy = svd(y.as_ref())?;
    let rank = fy.numerical_rank(RANK_RTOL);
    if rank < cfg.k {
        return Err(Error::Rank {
            context: "sketch Y",
            rank,
            requested: cfg.k,
        });
    }
    let uy = fy.truncate(rank).u;
    let b = uy.adjoint() * &xc;
    let fb = svd(b.as_ref())?;
    let ub = fb.u.subcols(0, cfg.k);
    let ur = &uy * ub;
    OrthoSymplecticBasis::from_complex(ur.as_ref())
}
