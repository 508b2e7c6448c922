//! Snapshot matrices, ortho-symplectic bases and the routines that build them.
//!
//! States are stacked as `x = [q; p]` with `N` positions followed by `N`
//! momenta. An ortho-symplectic basis with `k` pairs is stored through its two
//! `N x k` blocks and assembles to the `2N x 2k` matrix
//! `[VQ, -VP; VP, VQ] = [E, J^T E]` where `E = [VQ; VP]`.

mod csvd;
mod rcsvd;
mod real;

pub use csvd::{csvd, csvd_with_spectrum};
pub use rcsvd::{rcsvd, rcsvd_with_sketch};
pub use real::{extended_snapshots, rcsvd_real, rcsvd_real_with_sketch, real_sketch, sketched_extended, sketched_pod};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c64, ensure_finite, frobenius, orthonormality_defect, truncated_svd, CMat, Mat, MatRef, RMat};

/// Relative threshold below which singular values count as zero.
pub const RANK_RTOL: f64 = 1e-14;

/// Relative singular-value gap demanded at a truncation cut.
pub const GAP_RTOL: f64 = 1e-8;

/// Real `2N x n_s` matrix of states, one per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: RMat,
}

impl SnapshotMatrix {
    pub fn new(data: RMat) -> Result<Self> {
        if data.nrows() == 0 || !data.nrows().is_multiple_of(2) {
            return Err(Error::arg(format!(
                "snapshot matrix needs an even, positive row count, got {}",
                data.nrows()
            )));
        }
        if data.ncols() == 0 {
            return Err(Error::arg("snapshot matrix has no columns"));
        }
        ensure_finite(data.as_ref())?;
        Ok(Self { data })
    }

    /// Stacks position and momentum blocks.
    pub fn from_qp(q: MatRef<'_, f64>, p: MatRef<'_, f64>) -> Result<Self> {
        if q.nrows() != p.nrows() || q.ncols() != p.ncols() {
            return Err(Error::arg("position and momentum blocks differ in shape"));
        }
        let n = q.nrows();
        Self::new(Mat::from_fn(2 * n, q.ncols(), |i, j| {
            if i < n {
                q[(i, j)]
            } else {
                p[(i - n, j)]
            }
        }))
    }

    pub fn data(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn into_inner(self) -> RMat {
        self.data
    }

    /// Half dimension `N`.
    pub fn n_half(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn n_s(&self) -> usize {
        self.data.ncols()
    }

    pub fn q(&self) -> MatRef<'_, f64> {
        self.data.as_ref().subrows(0, self.n_half())
    }

    pub fn p(&self) -> MatRef<'_, f64> {
        self.data.as_ref().subrows(self.n_half(), self.n_half())
    }

    /// `X_c = Q + iP`.
    pub fn complexify(&self) -> CMat {
        let (q, p) = (self.q(), self.p());
        CMat::from_fn(self.n_half(), self.n_s(), |i, j| c64::new(q[(i, j)], p[(i, j)]))
    }
}

/// The canonical Poisson matrix `J = [0, I; -I, 0]` of size `2N`, applied
/// through row shuffles and sign flips only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoissonOperator {
    n: usize,
}

impl PoissonOperator {
    pub fn new(n_half: usize) -> Self {
        Self { n: n_half }
    }

    pub fn n_half(&self) -> usize {
        self.n
    }

    /// `J [a; b] = [b; -a]`.
    pub fn apply(&self, x: MatRef<'_, f64>) -> RMat {
        self.check(x);
        let n = self.n;
        Mat::from_fn(
            2 * n,
            x.ncols(),
            |i, j| if i < n { x[(i + n, j)] } else { -x[(i - n, j)] },
        )
    }

    /// `J^T [a; b] = [-b; a]`.
    pub fn apply_transpose(&self, x: MatRef<'_, f64>) -> RMat {
        self.check(x);
        let n = self.n;
        Mat::from_fn(
            2 * n,
            x.ncols(),
            |i, j| if i < n { -x[(i + n, j)] } else { x[(i - n, j)] },
        )
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), 2 * self.n, "vector length does not match the Poisson operator");
        let (a, b) = x.split_at(self.n);
        b.iter().copied().chain(a.iter().map(|v| -v)).collect()
    }

    /// Dense copy, for tests and tiny systems.
    pub fn to_dense(&self) -> RMat {
        self.apply(RMat::identity(2 * self.n, 2 * self.n).as_ref())
    }

    fn check(&self, x: MatRef<'_, f64>) {
        assert_eq!(x.nrows(), 2 * self.n, "row count does not match the Poisson operator");
    }
}

/// A real basis with orthonormal, symplectic columns, stored as `VQ`, `VP`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSymplecticBasis {
    vq: RMat,
    vp: RMat,
}

impl OrthoSymplecticBasis {
    /// Tolerance on the orthonormality of complex input columns.
    pub const INPUT_TOL: f64 = 1e-8;

    /// Maps a complex `N x k` matrix with orthonormal columns to the real
    /// basis with `VQ = Re U`, `VP = Im U`.
    pub fn from_complex(uc: MatRef<'_, c64>) -> Result<Self> {
        if uc.ncols() == 0 || uc.ncols() > uc.nrows() {
            return Err(Error::arg(format!(
                "complex basis of shape {}x{} is not tall",
                uc.nrows(),
                uc.ncols()
            )));
        }
        ensure_finite(uc)?;
        let defect = orthonormality_defect(uc);
        if defect > Self::INPUT_TOL {
            return Err(Error::Structure(format!(
                "complex basis columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self::from_blocks_unchecked(
            Mat::from_fn(uc.nrows(), uc.ncols(), |i, j| uc[(i, j)].re),
            Mat::from_fn(uc.nrows(), uc.ncols(), |i, j| uc[(i, j)].im),
        ))
    }

    /// Wraps `VQ`, `VP` after checking the structure at `tol`.
    pub fn from_blocks(vq: RMat, vp: RMat, tol: f64) -> Result<Self> {
        if vq.nrows() != vp.nrows() || vq.ncols() != vp.ncols() || vq.ncols() == 0 {
            return Err(Error::arg("basis blocks differ in shape or are empty"));
        }
        ensure_finite(vq.as_ref())?;
        ensure_finite(vp.as_ref())?;
        let basis = Self::from_blocks_unchecked(vq, vp);
        let report = check_structure(&basis, tol);
        if !report.pass {
            return Err(Error::Structure(format!(
                "basis is not ortho-symplectic: orthonormality defect {:.3e}, symplecticity defect {:.3e}",
                report.orthonormality_defect, report.symplecticity_defect
            )));
        }
        Ok(basis)
    }

    /// Splits `E = [VQ; VP]` (`2N x k`) into blocks and checks the structure.
    pub fn from_e(e: MatRef<'_, f64>, tol: f64) -> Result<Self> {
        if e.nrows() % 2 != 0 {
            return Err(Error::arg("basis E needs an even row count"));
        }
        let n = e.nrows() / 2;
        Self::from_blocks(e.subrows(0, n).to_owned(), e.subrows(n, n).to_owned(), tol)
    }

    pub(crate) fn from_blocks_unchecked(vq: RMat, vp: RMat) -> Self {
        Self { vq, vp }
    }

    pub fn vq(&self) -> MatRef<'_, f64> {
        self.vq.as_ref()
    }

    pub fn vp(&self) -> MatRef<'_, f64> {
        self.vp.as_ref()
    }

    pub fn n_half(&self) -> usize {
        self.vq.nrows()
    }

    /// Number of symplectic pairs; the assembled basis has twice as many columns.
    pub fn k(&self) -> usize {
        self.vq.ncols()
    }

    /// `E = [VQ; VP]`.
    pub fn e(&self) -> RMat {
        let n = self.n_half();
        Mat::from_fn(2 * n, self.k(), |i, j| {
            if i < n {
                self.vq[(i, j)]
            } else {
                self.vp[(i - n, j)]
            }
        })
    }

    /// The full `2N x 2k` matrix `[VQ, -VP; VP, VQ]`.
    pub fn assemble(&self) -> RMat {
        let (n, k) = (self.n_half(), self.k());
        Mat::from_fn(2 * n, 2 * k, |i, j| match (i < n, j < k) {
            (true, true) => self.vq[(i, j)],
            (true, false) => -self.vp[(i, j - k)],
            (false, true) => self.vp[(i - n, j)],
            (false, false) => self.vq[(i - n, j - k)],
        })
    }

    /// `U_c = VQ + i VP`.
    pub fn to_complex(&self) -> CMat {
        CMat::from_fn(self.n_half(), self.k(), |i, j| {
            c64::new(self.vq[(i, j)], self.vp[(i, j)])
        })
    }

    /// Reduced coordinates `V^T X`.
    pub fn coordinates(&self, x: MatRef<'_, f64>) -> RMat {
        self.assemble().transpose() * x
    }

    /// Lift reduced coordinates back to the full space, `V Y`.
    pub fn lift(&self, y: MatRef<'_, f64>) -> RMat {
        self.assemble() * y
    }

    /// `J_2k V^T J_2N^T`, which equals `V^T` for an ortho-symplectic `V`.
    pub fn symplectic_inverse(&self) -> RMat {
        symplectic_inverse(self.assemble().as_ref())
    }
}

/// Symplectic inverse `J_2k V^T J_2N^T` of any real `2N x 2k` matrix.
pub fn symplectic_inverse(v: MatRef<'_, f64>) -> RMat {
    assert!(
        v.nrows() % 2 == 0 && v.ncols() % 2 == 0,
        "symplectic inverse needs even dimensions"
    );
    let (n, k) = (v.nrows() / 2, v.ncols() / 2);
    // M = V^T (2k x 2N). M J^T = [M2, -M1] in column blocks; J_2k X = [X2; -X1] in row blocks.
    Mat::from_fn(2 * k, 2 * n, |i, j| {
        let (row, sign_row) = if i < k { (i + k, 1.0) } else { (i - k, -1.0) };
        let (col, sign_col) = if j < n { (j + n, 1.0) } else { (j - n, -1.0) };
        sign_row * sign_col * v[(col, row)]
    })
}

/// Distances of a basis from orthonormality and symplecticity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    /// `||V^T V - I||_F`.
    pub orthonormality_defect: f64,
    /// `||V^T J V - J||_F`.
    pub symplecticity_defect: f64,
    pub pass: bool,
}

pub fn check_structure(basis: &OrthoSymplecticBasis, tol: f64) -> StructureReport {
    let v = basis.assemble();
    let k = basis.k();
    let mut gram = v.transpose() * &v;
    for i in 0..2 * k {
        gram[(i, i)] -= 1.0;
    }
    let jv = PoissonOperator::new(basis.n_half()).apply(v.as_ref());
    let mut sym = v.transpose() * &jv;
    let j2k = PoissonOperator::new(k).to_dense();
    sym -= &j2k;
    let orthonormality_defect = frobenius(gram.as_ref());
    let symplecticity_defect = frobenius(sym.as_ref());
    StructureReport {
        orthonormality_defect,
        symplecticity_defect,
        pass: orthonormality_defect <= tol && symplecticity_defect <= tol,
    }
}

/// First `r` left singular vectors of a real matrix.
pub fn pod(m: MatRef<'_, f64>, r: usize) -> Result<RMat> {
    Ok(truncated_svd(m, r)?.u)
}

/// `(sigma_r - sigma_{r+1}) / sigma_r` for a non-increasing spectrum, where a
/// missing `sigma_{r+1}` counts as zero.
pub(crate) fn relative_gap(sigma: &[f64], r: usize) -> f64 {
    let sr = sigma[r - 1];
    let next = sigma.get(r).copied().unwrap_or(0.0);
    if sr <= 0.0 {
        0.0
    } else {
        (sr - next) / sr
    }
}
