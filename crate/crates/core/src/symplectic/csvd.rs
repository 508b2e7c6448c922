use super::{OrthoSymplecticBasis, SnapshotMatrix, RANK_RTOL};
use crate::error::{Error, Result};
use crate::numerics::svd;

/// Optimal ortho-symplectic basis of the form `[E, J^T E]`: the leading `k`
/// left singular vectors of `X_c = Q + iP`, split into real and imaginary
/// parts.
pub fn csvd(xs: &SnapshotMatrix, k: usize) -> Result<OrthoSymplecticBasis> {
    Ok(csvd_with_spectrum(xs, k)?.0)
}

/// Like [`csvd`], also returning every singular value of `X_c`.
pub fn csvd_with_spectrum(xs: &SnapshotMatrix, k: usize) -> Result<(OrthoSymplecticBasis, Vec<f64>)> {
    let max = xs.n_half().min(xs.n_s());
    if k == 0 || k > max {
        return Err(Error::arg(format!("k = {k} outside 1..={max}")));
    }
    let f = svd(xs.complexify().as_ref())?;
    let rank = f.numerical_rank(RANK_RTOL);
    if rank < k {
        return Err(Error::Rank {
            context: "complex snapshot matrix",
            rank,
            requested: k,
        });
    }
    let sigma = f.sigma.clone();
    let uc = f.truncate(k).u;
    Ok((OrthoSymplecticBasis::from_complex(uc.as_ref())?, sigma))
}
