use crate::error::{Error, Result};

/// Cholesky factor `A = L L^T` of a symmetric positive definite band matrix.
///
/// Row `i` of `L` stores `L[i][i-d]` for `d = 0..=bw`, so memory and the
/// factorization cost are `O(n bw)` and `O(n bw^2)`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    /// Factors the matrix whose lower band entries are `entry(i, j)` for
    /// `j <= i <= j + bw`.
    pub fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut sum = entry(i, j);
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    sum -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if i == j {
                    if !(sum > 0.0) {
                        return Err(Error::Solver(format!(
                            "non-positive pivot {sum:.3e} at row {i} in banded Cholesky"
                        )));
                    }
                    l[i * w] = sum.sqrt();
                } else {
                    l[i * w + (i - j)] = sum / l[j * w];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n, "right-hand side length does not match the factor");
        let w = self.bw + 1;
        for i in 0..self.n {
            let mut s = b[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.l[i * w + (i - k)] * b[k];
            }
            b[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = b[i];
            for k in (i + 1)..(i + 1 + self.bw).min(self.n) {
                s -= self.l[k * w + (k - i)] * b[k];
            }
            b[i] = s / self.l[i * w];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_tridiagonal_system() {
        // 2 on the diagonal, -1 off: exact solution of A x = A 1 is 1
        let n = 7;
        let a = |i: usize, j: usize| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        };
        let f = BandedCholesky::factor(n, 1, a).unwrap();
        let mut b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a(i, j)).sum()).collect();
        f.solve_in_place(&mut b);
        assert!(b.iter().all(|x| (x - 1.0).abs() < 1e-13));
    }

    #[test]
    fn wider_band_matches_dense_product() {
        let n = 12;
        let bw = 3;
        let a = |i: usize, j: usize| {
            if i == j {
                10.0
            } else if i.abs_diff(j) <= bw {
                1.0 / (1.0 + (i + j) as f64)
            } else {
                0.0
            }
        };
        let f = BandedCholesky::factor(n, bw, a).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a(i, j) * x[j]).sum()).collect();
        f.solve_in_place(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let r = BandedCholesky::factor(3, 1, |i, j| if i == j { -1.0 } else { 0.0 });
        assert!(matches!(r, Err(Error::Solver(_))));
    }
}
