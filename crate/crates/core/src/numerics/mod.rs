//! Dense real and complex linear-algebra kernels.
//!
//! Matrices are plain [`faer::Mat`] values (column-major). The factorizations
//! are thin wrappers over faer that add input validation and a deterministic
//! phase convention for singular vectors, so that two runs on the same input
//! produce identical factors.

mod dft;

pub use dft::{unitary_dft_rows, unitary_idft_rows};
pub use faer::{c64, Mat, MatMut, MatRef};

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type RMat = Mat<f64>;
pub type CMat = Mat<c64>;

/// Scalar types the kernels accept: `f64` and `c64`.
pub trait Scalar:
    faer::traits::ComplexField<Real = f64>
    + Copy
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn modulus(self) -> f64;
    fn is_finite_value(self) -> bool;
    fn conjugate(self) -> Self;
    fn from_f64(x: f64) -> Self;
    /// `self / |self|`, or one for zero.
    fn unit(self) -> Self;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
    fn conjugate(self) -> Self {
        self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn unit(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

impl Scalar for c64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
    fn from_f64(x: f64) -> Self {
        c64::new(x, 0.0)
    }
    fn unit(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
}

/// Rejects matrices carrying NaN or infinite entries.
pub fn ensure_finite<T: Scalar>(a: MatRef<'_, T>) -> Result<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].is_finite_value() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Economy-size singular value decomposition `A = U diag(sigma) V^H`.
#[derive(Debug, Clone)]
pub struct SvdFactors<T: Scalar> {
    pub u: Mat<T>,
    pub sigma: Vec<f64>,
    pub v: Mat<T>,
}

impl<T: Scalar> SvdFactors<T> {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Number of singular values above `rtol * sigma_1`.
    pub fn numerical_rank(&self, rtol: f64) -> usize {
        match self.sigma.first() {
            Some(&s1) if s1 > 0.0 => self.sigma.iter().take_while(|&&s| s > rtol * s1).count(),
            _ => 0,
        }
    }

    /// Keeps the leading `r` triplets.
    pub fn truncate(mut self, r: usize) -> Self {
        let r = r.min(self.sigma.len());
        self.sigma.truncate(r);
        self.u = self.u.subcols(0, r).to_owned();
        self.v = self.v.subcols(0, r).to_owned();
        self
    }

    pub fn reconstruct(&self) -> Mat<T> {
        let scaled = Mat::from_fn(self.u.nrows(), self.sigma.len(), |i, j| {
            self.u[(i, j)] * T::from_f64(self.sigma[j])
        });
        &scaled * self.v.adjoint()
    }
}

/// Economy SVD with singular values in non-increasing order.
///
/// Each left singular vector is rotated so that its largest-magnitude entry
/// (first one on ties) is real and positive; the matching right vector gets
/// the same rotation.
pub fn svd<T: Scalar>(a: MatRef<'_, T>) -> Result<SvdFactors<T>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::arg("svd of an empty matrix"));
    }
    ensure_finite(a)?;
    let dec = a.thin_svd().map_err(|_| Error::NoConvergence {
        rows: a.nrows(),
        cols: a.ncols(),
    })?;
    let mut u = dec.U().to_owned();
    let mut v = dec.V().to_owned();
    let sigma: Vec<f64> = dec.S().column_vector().iter().map(|s| s.modulus()).collect();
    for j in 0..sigma.len() {
        let phase = leading_phase(u.col(j));
        if phase != T::from_f64(1.0) {
            for i in 0..u.nrows() {
                u[(i, j)] = u[(i, j)] * phase;
            }
            for i in 0..v.nrows() {
                v[(i, j)] = v[(i, j)] * phase;
            }
        }
    }
    Ok(SvdFactors { u, sigma, v })
}

/// Conjugate unit of the largest-magnitude entry of `col`.
fn leading_phase<T: Scalar>(col: faer::ColRef<'_, T>) -> T {
    let mut best = 0;
    let mut best_mod = -1.0;
    for i in 0..col.nrows() {
        let m = col[i].modulus();
        if m > best_mod {
            best_mod = m;
            best = i;
        }
    }
    col[best].unit().conjugate()
}

/// Leading `r` singular triplets.
pub fn truncated_svd<T: Scalar>(a: MatRef<'_, T>, r: usize) -> Result<SvdFactors<T>> {
    let max = a.nrows().min(a.ncols());
    if r == 0 || r > max {
        return Err(Error::arg(format!("truncation rank {r} outside 1..={max}")));
    }
    Ok(svd(a)?.truncate(r))
}

/// Singular values only, non-increasing.
pub fn singular_values<T: Scalar>(a: MatRef<'_, T>) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    ensure_finite(a)?;
    let s = a.singular_values().map_err(|_| Error::NoConvergence {
        rows: a.nrows(),
        cols: a.ncols(),
    })?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub frobenius: f64,
    pub spectral: f64,
}

pub fn frobenius<T: Scalar>(a: MatRef<'_, T>) -> f64 {
    let mut scale = 0.0f64;
    let mut ssq = 1.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, j)].modulus();
            if x > 0.0 {
                if scale < x {
                    ssq = 1.0 + ssq * (scale / x) * (scale / x);
                    scale = x;
                } else {
                    ssq += (x / scale) * (x / scale);
                }
            }
        }
    }
    scale * ssq.sqrt()
}

pub fn spectral<T: Scalar>(a: MatRef<'_, T>) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

pub fn norms<T: Scalar>(a: MatRef<'_, T>) -> Result<Norms> {
    Ok(Norms {
        frobenius: frobenius(a),
        spectral: spectral(a)?,
    })
}

/// Thin QR factorization of a tall matrix; `R` has a real non-negative diagonal.
#[derive(Debug, Clone)]
pub struct QrFactors<T: Scalar> {
    pub q: Mat<T>,
    pub r: Mat<T>,
}

pub fn qr<T: Scalar>(a: MatRef<'_, T>) -> Result<QrFactors<T>> {
    let (m, n) = (a.nrows(), a.ncols());
    if m < n {
        return Err(Error::arg(format!("qr needs rows >= cols, got {m}x{n}")));
    }
    ensure_finite(a)?;
    let dec = a.qr();
    let mut q = dec.compute_thin_Q();
    let mut r = dec.thin_R().to_owned();
    for i in 0..n {
        let phase = r[(i, i)].unit();
        if phase != T::from_f64(1.0) {
            let inv = phase.conjugate();
            for j in 0..n {
                r[(i, j)] = inv * r[(i, j)];
            }
            for row in 0..m {
                q[(row, i)] = q[(row, i)] * phase;
            }
        }
    }
    // strip roundoff on and below the diagonal
    for j in 0..n {
        r[(j, j)] = T::from_f64(r[(j, j)].modulus());
        for i in (j + 1)..n {
            r[(i, j)] = T::from_f64(0.0);
        }
    }
    Ok(QrFactors { q, r })
}

/// Orthonormal basis of the column span (the `Q` of a thin QR).
pub fn orthonormalize<T: Scalar>(a: MatRef<'_, T>) -> Result<Mat<T>> {
    Ok(qr(a)?.q)
}

pub fn real_part(a: MatRef<'_, c64>) -> RMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].re)
}

pub fn imag_part(a: MatRef<'_, c64>) -> RMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].im)
}

pub fn from_parts(re: MatRef<'_, f64>, im: MatRef<'_, f64>) -> CMat {
    assert_eq!((re.nrows(), re.ncols()), (im.nrows(), im.ncols()));
    Mat::from_fn(re.nrows(), re.ncols(), |i, j| c64::new(re[(i, j)], im[(i, j)]))
}

pub fn to_complex(a: MatRef<'_, f64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| c64::new(a[(i, j)], 0.0))
}

/// `A^H A - I` in Frobenius norm.
pub fn orthonormality_defect<T: Scalar>(a: MatRef<'_, T>) -> f64 {
    let mut g = a.adjoint() * a;
    for i in 0..g.nrows() {
        g[(i, i)] = g[(i, i)] - T::from_f64(1.0);
    }
    frobenius(g.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_real(m: usize, n: usize, seed: u64) -> RMat {
        let mut r = rng::stream(seed, "test-real", 0);
        Mat::from_fn(m, n, |_, _| r.sample(StandardNormal))
    }

    fn random_complex(m: usize, n: usize, seed: u64) -> CMat {
        let mut r = rng::stream(seed, "test-complex", 0);
        Mat::from_fn(m, n, |_, _| {
            c64::new(r.sample(StandardNormal), r.sample(StandardNormal))
        })
    }

    #[test]
    fn diagonal_svd() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { [3.0, 1.0][i] } else { 0.0 });
        let f = svd(a.as_ref()).unwrap();
        assert_eq!(f.sigma, vec![3.0, 1.0]);
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((f.u[(i, j)] - e).abs() < 1e-15);
                assert!((f.v[(i, j)] - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_matrix_svd() {
        let f = svd(RMat::zeros(2, 2).as_ref()).unwrap();
        assert_eq!(f.sigma, vec![0.0, 0.0]);
    }

    #[test]
    fn complex_svd_reconstructs_with_phase_convention() {
        let a = random_complex(8, 5, 1);
        let f = svd(a.as_ref()).unwrap();
        let err = frobenius((&f.reconstruct() - &a).as_ref()) / frobenius(a.as_ref());
        assert!(err <= 1e-12, "{err}");
        assert!(orthonormality_defect(f.u.as_ref()) < 1e-12);
        assert!(orthonormality_defect(f.v.as_ref()) < 1e-12);
        assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        for j in 0..f.rank() {
            let lead =
                f.u.col(j)
                    .iter()
                    .copied()
                    .max_by(|x, y| x.norm().total_cmp(&y.norm()))
                    .unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
    }

    #[test]
    fn svd_is_deterministic() {
        let a = random_complex(9, 6, 2);
        let f = svd(a.as_ref()).unwrap();
        let g = svd(a.as_ref()).unwrap();
        assert_eq!(f.sigma, g.sigma);
        assert!(f.u == g.u && f.v == g.v);
    }

    #[test]
    fn svd_rejects_non_finite() {
        let mut a = RMat::zeros(2, 2);
        a[(1, 0)] = f64::NAN;
        assert!(matches!(svd(a.as_ref()), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn truncated_svd_tail() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 2.0, 1.0][i] } else { 0.0 });
        let f = truncated_svd(a.as_ref(), 2).unwrap();
        let res = frobenius((&a - &f.reconstruct()).as_ref());
        assert!((res * res - 1.0).abs() < 1e-14);
        let full = truncated_svd(a.as_ref(), 3).unwrap();
        assert!(frobenius((&a - &full.reconstruct()).as_ref()) < 1e-12);
        assert!(truncated_svd(a.as_ref(), 0).is_err());
        assert!(truncated_svd(a.as_ref(), 4).is_err());
    }

    #[test]
    fn eckart_young_on_seeded_matrices() {
        for seed in 0..200 {
            let m = 3 + (seed as usize % 8);
            let n = 2 + (seed as usize * 7 % 6);
            let a = random_real(m, n, seed);
            let r = 1 + seed as usize % m.min(n);
            // the oracle: full SVD tail
            let full = svd(a.as_ref()).unwrap();
            let tail: f64 = full.sigma[r..].iter().map(|s| s * s).sum();
            let f = truncated_svd(a.as_ref(), r).unwrap();
            let res = frobenius((&a - &f.reconstruct()).as_ref()).powi(2);
            let scale = frobenius(a.as_ref()).powi(2);
            assert!(
                (res - tail).abs() <= 1e-10 * tail.max(1e-6 * scale),
                "seed {seed}: {res} vs {tail}"
            );
        }
    }

    #[test]
    fn norms_of_small_matrices() {
        let i3 = Mat::<f64>::identity(3, 3);
        let n = norms(i3.as_ref()).unwrap();
        assert!((n.frobenius - 3f64.sqrt()).abs() < 1e-15 && (n.spectral - 1.0).abs() < 1e-15);
        let d = Mat::from_fn(2, 2, |i, j| if i == j { [2.0, 1.0][i] } else { 0.0 });
        let n = norms(d.as_ref()).unwrap();
        assert!((n.frobenius - 5f64.sqrt()).abs() < 1e-15 && (n.spectral - 2.0).abs() < 1e-15);
        let a = random_real(7, 4, 3);
        let n = norms(a.as_ref()).unwrap();
        assert!((n.spectral - svd(a.as_ref()).unwrap().sigma[0]).abs() <= 1e-12 * n.spectral);
    }

    #[test]
    fn qr_small_cases() {
        let a = Mat::from_fn(2, 1, |i, _| if i == 0 { 2.0 } else { 0.0 });
        let f = qr(a.as_ref()).unwrap();
        assert!((f.q[(0, 0)] - 1.0).abs() < 1e-15 && f.q[(1, 0)].abs() < 1e-15);
        assert!((f.r[(0, 0)] - 2.0).abs() < 1e-15);

        let o = svd(random_complex(6, 3, 4).as_ref()).unwrap().u;
        let f = qr(o.as_ref()).unwrap();
        assert!(frobenius((&f.r - &Mat::<c64>::identity(3, 3)).as_ref()) < 1e-12);
    }

    #[test]
    fn qr_reconstructs() {
        let a = random_complex(9, 3, 5);
        let f = qr(a.as_ref()).unwrap();
        assert!(orthonormality_defect(f.q.as_ref()) < 1e-12);
        let err = frobenius((&(&f.q * &f.r) - &a).as_ref()) / frobenius(a.as_ref());
        assert!(err <= 1e-12);
        for i in 0..3 {
            assert!(f.r[(i, i)].im == 0.0 && f.r[(i, i)].re >= 0.0);
            for j in 0..i {
                assert_eq!(f.r[(i, j)], c64::new(0.0, 0.0));
            }
        }
        assert!(qr(random_real(2, 3, 1).as_ref()).is_err());
    }
}
