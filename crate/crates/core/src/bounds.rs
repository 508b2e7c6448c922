//! Projection errors of symplectic bases and a priori bounds for the
//! randomized basis.
//!
//! All errors are kept as unsquared Frobenius norms; squares appear only in
//! reports. Singular values `sigma_j` are those of the complex snapshot matrix
//! `X_c = Q + iP`, indexed from one, with `sigma_j = 0` past the end of the
//! stored spectrum.
//!
//! The bounds come in two families. The deterministic ones depend on the drawn
//! sketch through `rho = ||Omega_2|| ||Omega_1^+||`, where `Omega_1`, `Omega_2`
//! split `V^H Omega` (rows of the right singular vectors of `X_c`). The
//! probabilistic ones replace `rho^2` by `6 n_s / l`, which holds with
//! probability at least `1 - 2/k` once `l` passes [`srft_threshold`].

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c64, frobenius, singular_values, svd, CMat, MatRef};
use crate::sketching::{srft_threshold, Sketch, SketchConfig};
use crate::symplectic::{OrthoSymplecticBasis, SnapshotMatrix};

/// Non-increasing, non-negative singular values with a label saying where
/// they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    source: String,
}

impl SingularSpectrum {
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::arg("singular values must be finite and non-negative"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::arg("singular values must be non-increasing"));
        }
        Ok(Self {
            values,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sigma_j` for one-based `j`; zero beyond the stored values.
    pub fn sigma(&self, j: usize) -> f64 {
        assert!(j >= 1, "singular values are indexed from one");
        self.values.get(j - 1).copied().unwrap_or(0.0)
    }

    /// Multiplies every value by `c >= 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            source: self.source.clone(),
        }
    }
}

/// `sqrt(sum_{j > k} sigma_j^2)`, accumulated from the smallest value up.
pub fn optimal_tail(sigma: &SingularSpectrum, k: usize) -> Result<f64> {
    if k > sigma.len() {
        return Err(Error::arg(format!(
            "k = {k} exceeds the spectrum length {}",
            sigma.len()
        )));
    }
    Ok(sigma.values[k..].iter().rev().map(|s| s * s).sum::<f64>().sqrt())
}

/// Thin SVD data of `X_c` needed by the deterministic bounds.
#[derive(Debug, Clone)]
pub struct SnapshotSvd {
    spectrum: SingularSpectrum,
    v: CMat,
    completion: OnceLock<CMat>,
}

impl SnapshotSvd {
    pub fn compute(xs: &SnapshotMatrix) -> Result<Self> {
        let f = svd(xs.complexify().as_ref())?;
        Ok(Self {
            spectrum: SingularSpectrum::new(f.sigma, "complex snapshot matrix")?,
            v: f.v,
            completion: OnceLock::new(),
        })
    }

    pub fn spectrum(&self) -> &SingularSpectrum {
        &self.spectrum
    }

    pub fn n_s(&self) -> usize {
        self.v.nrows()
    }

    /// Leading `m` right singular vectors. When `m` exceeds the economy rank
    /// the thin factor is completed by an orthonormal basis of its
    /// complement (the singular values there are zero).
    pub fn right_vectors(&self, m: usize) -> Result<CMat> {
        self.right_vector_range(0, m)
    }

    /// Right singular vectors `start..end` of the completed unitary factor.
    /// The completion past the economy rank is computed once and cached.
    pub fn right_vector_range(&self, start: usize, end: usize) -> Result<CMat> {
        let (n_s, r) = (self.v.nrows(), self.v.ncols());
        if start > end || end > n_s {
            return Err(Error::arg(format!(
                "asked for right singular vectors {start}..{end} of an {n_s}-column matrix"
            )));
        }
        if end <= r {
            return Ok(self.v.subcols(start, end - start).to_owned());
        }
        let full_q = self.completion.get_or_init(|| self.v.qr().compute_Q());
        Ok(CMat::from_fn(n_s, end - start, |i, j| {
            let c = start + j;
            if c < r {
                self.v[(i, c)]
            } else {
                full_q[(i, c)]
            }
        }))
    }
}

/// Split of `V^H Omega` into its first `rows` rows (`Omega_1`) and the rest.
#[derive(Debug, Clone)]
pub struct OmegaBlocks {
    pub rows: usize,
    pub omega1: CMat,
    /// `||Omega_2||_2`.
    pub norm_omega2: f64,
    /// `||Omega_1^+||_2 = 1 / sigma_min(Omega_1)`.
    pub norm_omega1_pinv: f64,
}

impl OmegaBlocks {
    /// `rho = ||Omega_2||_2 ||Omega_1^+||_2`.
    pub fn rho(&self) -> f64 {
        self.norm_omega2 * self.norm_omega1_pinv
    }
}

/// Builds `Omega_1` with `l - s` rows. `s = l - k` gives the split used by
/// [`eta_det`]; other values of `s` feed [`eta_det_adv`].
///
/// `Omega_2 = V_2^H Omega` uses the completed unitary factor, so the choice
/// of completion past the rank of `X_c` does not affect `||Omega_2||`.
pub fn omega_blocks(svd: &SnapshotSvd, omega: &Sketch, k: usize, s: usize) -> Result<OmegaBlocks> {
    let l = omega.l();
    if omega.n() != svd.n_s() {
        return Err(Error::arg(format!(
            "sketch has {} rows but the snapshot matrix has {} columns",
            omega.n(),
            svd.n_s()
        )));
    }
    if k == 0 || k > l || s > l - k {
        return Err(Error::arg(format!(
            "split needs 1 <= k <= l and s <= l - k (k = {k}, l = {l}, s = {s})"
        )));
    }
    let rows = l - s;
    let v1 = svd.right_vectors(rows)?;
    let v1h: CMat = v1.adjoint().to_owned();
    let omega1 = omega.apply(v1h.as_ref())?;
    let norm_omega2 = if rows == svd.n_s() {
        0.0
    } else {
        let v2h: CMat = svd.right_vector_range(rows, svd.n_s())?.adjoint().to_owned();
        let omega2 = omega.apply(v2h.as_ref())?;
        gram_spectral_norm(omega2.as_ref())?
    };
    let s1 = singular_values(omega1.as_ref())?;
    let (smax, smin) = (s1[0], s1[rows - 1]);
    if !(smin > 1e-12 * smax) {
        return Err(Error::Assumption(format!(
            "Omega_1 ({rows}x{l}) is not of full row rank (sigma_min/sigma_max = {:.3e})",
            if smax > 0.0 { smin / smax } else { 0.0 }
        )));
    }
    Ok(OmegaBlocks {
        rows,
        omega1,
        norm_omega2,
        norm_omega1_pinv: 1.0 / smin,
    })
}

/// `||A||_2` from the largest eigenvalue of the smaller Gram matrix. Much
/// cheaper than a full singular value sweep for the tall blocks met here, and
/// the eigenvalue carries an absolute error of order `eps ||A||^2`, which is
/// a relative error of order `eps` on the norm itself.
fn gram_spectral_norm(a: MatRef<'_, c64>) -> Result<f64> {
    let g: CMat = if a.nrows() >= a.ncols() {
        a.adjoint() * a
    } else {
        a * a.adjoint()
    };
    let ev = g
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence {
            rows: g.nrows(),
            cols: g.ncols(),
        })?;
    Ok(ev.iter().cloned().fold(0.0_f64, f64::max).sqrt())
}

/// `(1 + sqrt(1 + rho^2)) * tail_k` with `rho` from the `(k, rest)` split.
///
/// The inner part bounds the error of projecting onto the sketch range; the
/// extra `tail_k` pays for truncating to rank `k` afterwards. It also holds
/// with power iterations, since they only shrink the relevant ratio.
pub fn eta_det(sigma: &SingularSpectrum, blocks: &OmegaBlocks, k: usize) -> Result<f64> {
    if blocks.rows != k {
        return Err(Error::arg(format!(
            "the basic deterministic bound needs the (k, rest) split, got {} rows for k = {k}",
            blocks.rows
        )));
    }
    let rho = blocks.rho();
    Ok((1.0 + (1.0 + rho * rho).sqrt()) * optimal_tail(sigma, k.min(sigma.len()))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaGamma {
    pub alpha: f64,
    pub gamma: f64,
}

/// `alpha = sqrt(k) sigma_{l-s+1} r^{2q}`, `gamma = sigma_{l-s+1}/sigma_1 r^{2q}`
/// with `r = sigma_{l-s+1} / sigma_k`.
pub fn alpha_gamma(sigma: &SingularSpectrum, k: usize, l: usize, s: usize, q_pow: usize) -> Result<AlphaGamma> {
    if k == 0 || k > l || s > l - k {
        return Err(Error::arg(format!(
            "need 1 <= k <= l and s <= l - k (k = {k}, l = {l}, s = {s})"
        )));
    }
    let sk = sigma.sigma(k);
    if sk <= 0.0 {
        return Err(Error::Assumption(format!(
            "sigma_{k} = 0: the spectrum is degenerate at the target rank"
        )));
    }
    let sc = sigma.sigma(l - s + 1);
    let damp = (sc / sk).powi(2 * q_pow as i32);
    Ok(AlphaGamma {
        alpha: (k as f64).sqrt() * sc * damp,
        gamma: sc / sigma.sigma(1) * damp,
    })
}

/// The advanced deterministic bound in its two forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetAdv {
    /// `sqrt(tail^2 + alpha^2 rho^2)`.
    pub plain: f64,
    /// `sqrt(tail^2 + alpha^2 rho^2 / (1 + gamma^2 rho^2))`, never larger.
    pub sharp: f64,
}

pub fn eta_det_adv(
    sigma: &SingularSpectrum,
    blocks: &OmegaBlocks,
    k: usize,
    l: usize,
    s: usize,
    q_pow: usize,
) -> Result<DetAdv> {
    if blocks.rows != l - s {
        return Err(Error::arg(format!(
            "blocks have {} rows, expected l - s = {}",
            blocks.rows,
            l - s
        )));
    }
    let ag = alpha_gamma(sigma, k, l, s, q_pow)?;
    let tail = optimal_tail(sigma, k.min(sigma.len()))?;
    let rho2 = blocks.rho().powi(2);
    let num = ag.alpha * ag.alpha * rho2;
    Ok(DetAdv {
        plain: (tail * tail + num).sqrt(),
        sharp: (tail * tail + num / (1.0 + ag.gamma * ag.gamma * rho2)).sqrt(),
    })
}

fn check_sizes(k: usize, p_ovs: usize, n_s: usize) -> Result<usize> {
    let l = k + p_ovs;
    if k == 0 || l > n_s {
        return Err(Error::arg(format!(
            "need 1 <= k and k + p_ovs <= n_s (k = {k}, p_ovs = {p_ovs}, n_s = {n_s})"
        )));
    }
    Ok(l)
}

/// `(1 + sqrt(1 + 6 n_s / l)) * tail_k`.
pub fn eta_prob(sigma: &SingularSpectrum, k: usize, p_ovs: usize, n_s: usize) -> Result<f64> {
    let l = check_sizes(k, p_ovs, n_s)?;
    Ok((1.0 + (1.0 + 6.0 * n_s as f64 / l as f64).sqrt()) * optimal_tail(sigma, k.min(sigma.len()))?)
}

/// `sqrt(tail^2 + alpha^2 6 n_s / l)` with `alpha` taken at `s = 0`, that is
/// `sqrt(tail^2 + 6 (n_s/l) k sigma_{l+1}^2 (sigma_{l+1}/sigma_k)^{4q})`.
pub fn eta_prob_adv(sigma: &SingularSpectrum, k: usize, p_ovs: usize, q_pow: usize, n_s: usize) -> Result<f64> {
    let l = check_sizes(k, p_ovs, n_s)?;
    let ag = alpha_gamma(sigma, k, l, 0, q_pow)?;
    let tail = optimal_tail(sigma, k.min(sigma.len()))?;
    Ok((tail * tail + ag.alpha * ag.alpha * 6.0 * n_s as f64 / l as f64).sqrt())
}

/// The coarser bound `sqrt(1 + 6 n_s (sigma_{l+1}/sigma_k)^{4q}) * tail_k`,
/// which dominates [`eta_prob_adv`].
pub fn eta_prob_adv_factor_form(
    sigma: &SingularSpectrum,
    k: usize,
    p_ovs: usize,
    q_pow: usize,
    n_s: usize,
) -> Result<f64> {
    let l = check_sizes(k, p_ovs, n_s)?;
    let sk = sigma.sigma(k);
    if sk <= 0.0 {
        return Err(Error::Assumption(format!(
            "sigma_{k} = 0: the spectrum is degenerate at the target rank"
        )));
    }
    let r = (sigma.sigma(l + 1) / sk).powi(4 * q_pow as i32);
    Ok((1.0 + 6.0 * n_s as f64 * r).sqrt() * optimal_tail(sigma, k.min(sigma.len()))?)
}

/// Quasi-optimality constant `C = (sqrt(1 + 6 n_s / l) + 1)^2`.
pub fn quasi_opt_constant(n_s: usize, l: usize) -> Result<f64> {
    if l == 0 || l > n_s {
        return Err(Error::arg(format!("need 1 <= l <= n_s (l = {l}, n_s = {n_s})")));
    }
    Ok(((1.0 + 6.0 * n_s as f64 / l as f64).sqrt() + 1.0).powi(2))
}

/// Probability with which the probabilistic bounds may fail.
pub fn failure_probability(k: usize) -> f64 {
    2.0 / k as f64
}

/// Bound over true error; one or more means the bound held. A zero error
/// gives `+inf`.
pub fn effectivity(e_frob: f64, eta: f64) -> f64 {
    if e_frob == 0.0 {
        f64::INFINITY
    } else {
        eta / e_frob
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionError {
    pub frob: f64,
    pub squared: f64,
}

/// `||X_s - V V^T X_s||_F`.
///
/// Evaluated as `||X_s||^2 - ||V^T X_s||^2`, which never forms the
/// `2N x n_s` residual. When the difference is so small against `||X_s||^2`
/// that the subtraction could cost more than about `1e-8` relative accuracy,
/// the residual is formed explicitly instead.
pub fn projection_error(xs: &SnapshotMatrix, basis: &OrthoSymplecticBasis) -> Result<ProjectionError> {
    if basis.n_half() != xs.n_half() {
        return Err(Error::arg(format!(
            "basis has half dimension {}, snapshots have {}",
            basis.n_half(),
            xs.n_half()
        )));
    }
    let v = basis.assemble();
    let coords = v.transpose() * xs.data();
    let total = frobenius(xs.data()).powi(2);
    let kept = frobenius(coords.as_ref()).powi(2);
    let diff = total - kept;
    // rounding in total and kept is a few ulps of total; keep the relative
    // error of the difference well below 1e-8
    let squared = if diff > 1e3 * f64::EPSILON / 1e-8 * total {
        diff
    } else {
        let res = xs.data() - &v * &coords;
        frobenius(res.as_ref()).powi(2)
    };
    let frob = squared.sqrt();
    Ok(ProjectionError {
        frob,
        squared: frob * frob,
    })
}

/// Same error measured through the complex representation,
/// `||X_c - U_c U_c^H X_c||_F` with `U_c = VQ + i VP`.
pub fn complex_projection_error(xc: MatRef<'_, c64>, basis: &OrthoSymplecticBasis) -> f64 {
    let uc = basis.to_complex();
    let res = xc - &uc * (uc.adjoint() * xc);
    frobenius(res.as_ref())
}

/// Every bound and effectivity for one basis and the sketch it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub k: usize,
    pub p_ovs: usize,
    pub q_pow: usize,
    pub s: usize,
    pub seed: u64,
    pub e_proj_frob: f64,
    pub e_proj_sq: f64,
    pub tail: f64,
    pub eta_det: Option<f64>,
    pub eta_det_adv: Option<f64>,
    pub eta_det_adv_sharp: Option<f64>,
    pub eta_prob: f64,
    pub eta_prob_adv: f64,
    pub eff_det: Option<f64>,
    pub eff_det_adv: Option<f64>,
    pub eff_det_adv_sharp: Option<f64>,
    pub eff_prob: f64,
    pub eff_prob_adv: f64,
    /// `e_proj_sq / eta`, the squared-over-unsquared ratio some texts print.
    pub eff_literal_det: Option<f64>,
    pub eff_literal_det_adv: Option<f64>,
    pub eff_literal_prob: f64,
    pub eff_literal_prob_adv: f64,
    pub rho: Option<f64>,
    pub rho_adv: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub c_quasi_opt: f64,
    pub failure_prob: f64,
    /// `l` reaches the SRFT threshold (so the probabilistic bounds are backed
    /// by a guarantee).
    pub threshold_met: bool,
    /// `Omega_1` lost full row rank in some split; the affected bounds are `None`.
    pub assumption_violated: bool,
    /// The basis reproduces the snapshots exactly; effectivities are `+inf`.
    pub zero_error: bool,
    /// Some evaluated bound is below the measured error.
    pub bound_violated: bool,
}

/// Evaluates every bound for `basis`, built by a randomized method from
/// `omega` under `cfg`.
pub fn bound_report(
    xs: &SnapshotMatrix,
    svd: &SnapshotSvd,
    basis: &OrthoSymplecticBasis,
    omega: &Sketch,
    cfg: &SketchConfig,
) -> Result<BoundReport> {
    let (k, l, n_s) = (cfg.k, cfg.l(), xs.n_s());
    let sigma = svd.spectrum();
    let err = projection_error(xs, basis)?;
    let tail = optimal_tail(sigma, k.min(sigma.len()))?;
    let ag = alpha_gamma(sigma, k, l, cfg.s, cfg.q_pow)?;

    let mut assumption_violated = false;
    let mut soft = |r: Result<OmegaBlocks>| match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::Assumption(_)) => {
            assumption_violated = true;
            Ok(None)
        }
        Err(e) => Err(e),
    };
    let basic = soft(omega_blocks(svd, omega, k, l - k))?;
    let adv = soft(omega_blocks(svd, omega, k, cfg.s))?;

    let eta_det = basic.as_ref().map(|b| eta_det(sigma, b, k)).transpose()?;
    let det_adv = adv
        .as_ref()
        .map(|b| eta_det_adv(sigma, b, k, l, cfg.s, cfg.q_pow))
        .transpose()?;
    let eta_prob = eta_prob(sigma, k, cfg.p_ovs, n_s)?;
    let eta_prob_adv = eta_prob_adv(sigma, k, cfg.p_ovs, cfg.q_pow, n_s)?;

    let e = err.frob;
    let eff = |eta: f64| effectivity(e, eta);
    let lit = |eta: f64| if eta == 0.0 { f64::INFINITY } else { err.squared / eta };
    let threshold_met = k >= 2 && srft_threshold(k, n_s).map(|t| t <= l).unwrap_or(false);

    let mut etas = vec![eta_prob, eta_prob_adv];
    etas.extend(eta_det);
    etas.extend(det_adv.map(|d| d.plain));
    etas.extend(det_adv.map(|d| d.sharp));
    let bound_violated = etas.iter().any(|&eta| eta < e);

    Ok(BoundReport {
        k,
        p_ovs: cfg.p_ovs,
        q_pow: cfg.q_pow,
        s: cfg.s,
        seed: cfg.seed,
        e_proj_frob: e,
        e_proj_sq: err.squared,
        tail,
        eta_det,
        eta_det_adv: det_adv.map(|d| d.plain),
        eta_det_adv_sharp: det_adv.map(|d| d.sharp),
        eta_prob,
        eta_prob_adv,
        eff_det: eta_det.map(eff),
        eff_det_adv: det_adv.map(|d| eff(d.plain)),
        eff_det_adv_sharp: det_adv.map(|d| eff(d.sharp)),
        eff_prob: eff(eta_prob),
        eff_prob_adv: eff(eta_prob_adv),
        eff_literal_det: eta_det.map(lit),
        eff_literal_det_adv: det_adv.map(|d| lit(d.plain)),
        eff_literal_prob: lit(eta_prob),
        eff_literal_prob_adv: lit(eta_prob_adv),
        rho: basic.as_ref().map(OmegaBlocks::rho),
        rho_adv: adv.as_ref().map(OmegaBlocks::rho),
        alpha: ag.alpha,
        gamma: ag.gamma,
        c_quasi_opt: quasi_opt_constant(n_s, l)?,
        failure_prob: failure_probability(k),
        threshold_met,
        assumption_violated,
        zero_error: e == 0.0,
        bound_violated,
    })
}
