//! Random sketching matrices and power-iteration sketches.
//!
//! The structured sketch is the subsampled randomized Fourier transform
//! `Omega = sqrt(n/l) D F R`: random unit phases `D`, the unitary DFT `F`
//! and a random selection `R` of `l` out of `n` columns. It is never
//! materialized on the hot path; applying it to a matrix costs one FFT per row.
//!
//! All randomness flows through [`crate::rng`], so a sketch is a pure
//! function of `(n, l, seed)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c64, qr, unitary_dft_rows, CMat, MatRef};
use crate::rng;

/// A subsampled randomized Fourier transform of shape `n x l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SrftSketch {
    n: usize,
    l: usize,
    phases: Vec<c64>,
    selection: Vec<usize>,
    scale: f64,
    seed: u64,
}

impl SrftSketch {
    /// Draws the phases and the column selection from `seed`.
    ///
    /// Phases are `exp(2 pi i u)` with `u` a 53-bit uniform in `[0, 1)`. The
    /// selection is the prefix of a partial Fisher-Yates shuffle, which gives
    /// `l` distinct indices drawn uniformly without replacement.
    pub fn new(n: usize, l: usize, seed: u64) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::arg(format!(
                "sketch size l = {l} must satisfy 1 <= l <= n = {n}"
            )));
        }
        let mut r = rng::stream(seed, "srft", 0);
        let phases = (0..n)
            .map(|_| {
                let u: f64 = r.gen();
                c64::from_polar(1.0, 2.0 * PI * u)
            })
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in 0..l {
            let j = r.gen_range(i..n);
            perm.swap(i, j);
        }
        perm.truncate(l);
        Ok(Self {
            n,
            l,
            phases,
            selection: perm,
            scale: (n as f64 / l as f64).sqrt(),
            seed,
        })
    }

    /// Builds a sketch from explicit parts. Used by tests that need a
    /// controlled `Omega`.
    pub fn from_parts(phases: Vec<c64>, selection: Vec<usize>) -> Result<Self> {
        let n = phases.len();
        let l = selection.len();
        if l == 0 || l > n {
            return Err(Error::arg(format!(
                "sketch size l = {l} must satisfy 1 <= l <= n = {n}"
            )));
        }
        let mut seen = vec![false; n];
        for &s in &selection {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::arg(format!("selection index {s} repeated or out of range")));
            }
        }
        if phases.iter().any(|p| (p.norm() - 1.0).abs() > 1e-15) {
            return Err(Error::arg("phases must have unit modulus"));
        }
        Ok(Self {
            n,
            l,
            phases,
            selection,
            scale: (n as f64 / l as f64).sqrt(),
            seed: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn phases(&self) -> &[c64] {
        &self.phases
    }
    pub fn selection(&self) -> &[usize] {
        &self.selection
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Computes `A Omega` for an `m x n` matrix `A`.
    pub fn apply(&self, a: MatRef<'_, c64>) -> Result<CMat> {
        if a.ncols() != self.n {
            return Err(Error::arg(format!(
                "sketch expects {} columns, matrix has {}",
                self.n,
                a.ncols()
            )));
        }
        let scaled = CMat::from_fn(a.nrows(), self.n, |i, j| a[(i, j)] * self.phases[j]);
        let f = unitary_dft_rows(scaled.as_ref());
        Ok(CMat::from_fn(a.nrows(), self.l, |i, j| {
            f[(i, self.selection[j])] * self.scale
        }))
    }

    /// Dense `n x l` matrix, `Omega[a][j] = sqrt(n/l) d_a F[a][sel_j]`.
    pub fn to_dense(&self) -> CMat {
        let n = self.n as f64;
        CMat::from_fn(self.n, self.l, |a, j| {
            let ab = (a * self.selection[j]) % self.n;
            let f = c64::from_polar(1.0 / n.sqrt(), -2.0 * PI * ab as f64 / n);
            self.phases[a] * f * self.scale
        })
    }
}

/// `n x l` matrix of i.i.d. complex standard normal entries (real and
/// imaginary parts independent with variance 1/2 each).
pub fn gaussian_sketch(n: usize, l: usize, seed: u64) -> Result<CMat> {
    if l == 0 || n == 0 {
        return Err(Error::arg("gaussian sketch needs n >= 1 and l >= 1"));
    }
    let mut r = rng::stream(seed, "gaussian", 0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // fill column by column so the draw order is independent of storage
    let mut m = CMat::zeros(n, l);
    for j in 0..l {
        for i in 0..n {
            let re: f64 = r.sample(StandardNormal);
            let im: f64 = r.sample(StandardNormal);
            m[(i, j)] = c64::new(re * s, im * s);
        }
    }
    Ok(m)
}

/// Which random family a sketch is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SketchKind {
    #[default]
    Srft,
    Gaussian,
}

impl std::str::FromStr for SketchKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srft" => Ok(Self::Srft),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(Error::arg(format!("unknown sketch kind `{other}`"))),
        }
    }
}

/// A drawn sketching matrix, structured or dense.
#[derive(Debug, Clone)]
pub enum Sketch {
    Srft(SrftSketch),
    Dense(CMat),
}

impl Sketch {
    pub fn n(&self) -> usize {
        match self {
            Sketch::Srft(s) => s.n(),
            Sketch::Dense(m) => m.nrows(),
        }
    }

    pub fn l(&self) -> usize {
        match self {
            Sketch::Srft(s) => s.l(),
            Sketch::Dense(m) => m.ncols(),
        }
    }

    /// `A Omega`.
    pub fn apply(&self, a: MatRef<'_, c64>) -> Result<CMat> {
        match self {
            Sketch::Srft(s) => s.apply(a),
            Sketch::Dense(m) => {
                if a.ncols() != m.nrows() {
                    return Err(Error::arg(format!(
                        "sketch expects {} columns, matrix has {}",
                        m.nrows(),
                        a.ncols()
                    )));
                }
                Ok(a * m)
            }
        }
    }

    pub fn to_dense(&self) -> CMat {
        match self {
            Sketch::Srft(s) => s.to_dense(),
            Sketch::Dense(m) => m.clone(),
        }
    }
}

/// Parameters of one randomized basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchConfig {
    /// Number of symplectic pairs; the real basis has `2k` columns.
    pub k: usize,
    pub p_ovs: usize,
    pub q_pow: usize,
    #[serde(default)]
    pub kind: SketchKind,
    #[serde(default)]
    pub stabilize: bool,
    pub seed: u64,
    /// Row split used by the advanced deterministic bound.
    #[serde(default)]
    pub s: usize,
}

impl SketchConfig {
    pub fn new(k: usize, p_ovs: usize, q_pow: usize, seed: u64) -> Self {
        Self {
            k,
            p_ovs,
            q_pow,
            kind: SketchKind::Srft,
            stabilize: false,
            seed,
            s: 0,
        }
    }

    pub fn l(&self) -> usize {
        self.k + self.p_ovs
    }

    /// Checks the sizes against a snapshot set with `n_half` rows in the
    /// complex matrix and `n_s` columns.
    pub fn validate(&self, n_half: usize, n_s: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::arg("k must be at least 1"));
        }
        if self.k > n_half {
            return Err(Error::arg(format!(
                "k = {} exceeds half dimension N = {n_half}",
                self.k
            )));
        }
        if self.l() > n_s {
            return Err(Error::arg(format!(
                "sketch size l = k + p_ovs = {} exceeds snapshot count {n_s}",
                self.l()
            )));
        }
        if self.s > self.p_ovs {
            return Err(Error::arg(format!(
                "split s = {} exceeds l - k = {}",
                self.s, self.p_ovs
            )));
        }
        Ok(())
    }

    /// Draws the `n x l` sketch determined by this configuration.
    pub fn draw(&self, n: usize) -> Result<Sketch> {
        match self.kind {
            SketchKind::Srft => Ok(Sketch::Srft(SrftSketch::new(n, self.l(), self.seed)?)),
            SketchKind::Gaussian => Ok(Sketch::Dense(gaussian_sketch(n, self.l(), self.seed)?)),
        }
    }
}

/// `Y = X (X^H X)^q Omega`.
///
/// In plain mode the products are formed exactly as written. In stabilized
/// mode each application of `X^H` and `X` is followed by a thin QR and only
/// `Q` is kept; the result then has orthonormal columns spanning the same
/// space in exact arithmetic.
pub fn power_sketch(x: MatRef<'_, c64>, omega: &Sketch, q_pow: usize, stabilize: bool) -> Result<CMat> {
    if omega.n() != x.ncols() {
        return Err(Error::arg(format!(
            "sketch has {} rows but the matrix has {} columns",
            omega.n(),
            x.ncols()
        )));
    }
    let mut y = omega.apply(x)?;
    if stabilize {
        y = qr(y.as_ref())?.q;
    }
    for _ in 0..q_pow {
        let mut z = x.adjoint() * &y;
        if stabilize {
            z = qr(z.as_ref())?.q;
        }
        y = x * &z;
        if stabilize {
            y = qr(y.as_ref())?.q;
        }
    }
    Ok(y)
}

/// Smallest sketch size for which the SRFT is known to keep a fixed
/// `k`-dimensional subspace well conditioned: `ceil(4 (sqrt k + sqrt(8 ln(k n)))^2 ln k)`.
///
/// The natural logarithm is used throughout. The caller decides whether the
/// returned value is feasible (`<= n`).
pub fn srft_threshold(k: usize, n: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::arg("the SRFT threshold needs k >= 2"));
    }
    if n < k {
        return Err(Error::arg(format!(
            "the SRFT threshold needs n >= k, got n = {n}, k = {k}"
        )));
    }
    let (kf, nf) = (k as f64, n as f64);
    let root = kf.sqrt() + (8.0 * (kf * nf).ln()).sqrt();
    Ok((4.0 * root * root * kf.ln()).ceil() as usize)
}
