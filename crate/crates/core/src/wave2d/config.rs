use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the grid counts `n_xi1`, `n_xi2` relate to the unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridConvention {
    /// Counts include the two boundary nodes: spacing `L/(n-1)`, `n-2` unknowns.
    #[default]
    IncludesBoundary,
    /// Counts are interior nodes only: spacing `L/(n+1)`, `n` unknowns.
    InteriorOnly,
}

impl std::str::FromStr for GridConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "includes-boundary" => Ok(Self::IncludesBoundary),
            "interior-only" => Ok(Self::InteriorOnly),
            other => Err(Error::arg(format!(
                "unknown grid convention `{other}` (expected includes-boundary or interior-only)"
            ))),
        }
    }
}

/// Parameters of the 2D wave benchmark on `(0, extent_xi1) x (0, extent_xi2)`
/// with homogeneous Dirichlet boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveModelConfig {
    pub n_xi1: usize,
    pub n_xi2: usize,
    #[serde(default)]
    pub grid: GridConvention,
    #[serde(default = "default_extent1")]
    pub extent_xi1: f64,
    #[serde(default = "default_extent2")]
    pub extent_xi2: f64,
    /// Wave speed, which is also the parameter `mu`.
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "two")]
    pub u0_sup: f64,
    /// The shift `l` in the bump argument `4 |(xi2 + l/2 - u0_sup/2) / u0_sup|`.
    ///
    /// The default `3` puts the bump centre at `xi2 = -0.5`, so only the
    /// trailing half of the bump lies inside the domain. With `0` the bump
    /// occupies `[0, 2]` and is fully resolved.
    #[serde(default = "default_extent2")]
    pub bump_center_offset: f64,
    #[serde(default)]
    pub t0: f64,
    pub nt: usize,
}

fn default_extent1() -> f64 {
    0.5
}
fn default_extent2() -> f64 {
    3.0
}
fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}

impl WaveModelConfig {
    /// Full benchmark size: 50 x 300 grid points including the boundary
    /// and 1500 time steps.
    pub fn paper() -> Self {
        Self {
            n_xi1: 50,
            n_xi2: 300,
            grid: GridConvention::IncludesBoundary,
            nt: 1500,
            ..Self::desk()
        }
    }

    /// Small profile: 10 x 60 interior nodes (`2N = 1200`) and 150 steps.
    pub fn desk() -> Self {
        Self {
            n_xi1: 10,
            n_xi2: 60,
            grid: GridConvention::InteriorOnly,
            extent_xi1: 0.5,
            extent_xi2: 3.0,
            c: 1.0,
            u0_sup: 2.0,
            bump_center_offset: 3.0,
            t0: 0.0,
            nt: 150,
        }
    }

    pub fn with_speed(&self, c: f64) -> Self {
        Self { c, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_xi1 < 3 || self.n_xi2 < 3 {
            return Err(Error::arg(format!(
                "grid counts must be at least 3, got {} x {}",
                self.n_xi1, self.n_xi2
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::arg(format!("wave speed must be positive, got {}", self.c)));
        }
        if self.nt == 0 {
            return Err(Error::arg("nt must be at least 1"));
        }
        for (name, v) in [
            ("extent_xi1", self.extent_xi1),
            ("extent_xi2", self.extent_xi2),
            ("u0_sup", self.u0_sup),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::arg(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.bump_center_offset.is_finite() || !self.t0.is_finite() {
            return Err(Error::arg("bump_center_offset and t0 must be finite"));
        }
        Ok(())
    }

    /// Interior unknowns along each axis.
    pub fn interior(&self) -> (usize, usize) {
        match self.grid {
            GridConvention::IncludesBoundary => (self.n_xi1 - 2, self.n_xi2 - 2),
            GridConvention::InteriorOnly => (self.n_xi1, self.n_xi2),
        }
    }

    /// Grid spacing along each axis.
    pub fn spacing(&self) -> (f64, f64) {
        let (m1, m2) = self.interior();
        (self.extent_xi1 / (m1 + 1) as f64, self.extent_xi2 / (m2 + 1) as f64)
    }

    /// Half dimension `N` of the state.
    pub fn n_dof(&self) -> usize {
        let (m1, m2) = self.interior();
        m1 * m2
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + 2.0 / self.c
    }

    /// Coordinates of unknown `idx`; `xi1` runs fastest.
    pub fn node(&self, idx: usize) -> (f64, f64) {
        let (m1, _) = self.interior();
        let (d1, d2) = self.spacing();
        (((idx % m1) + 1) as f64 * d1, ((idx / m1) + 1) as f64 * d2)
    }
}

/// The training parameters `mu_j = 1 + 0.1 j`, `j = 0..=10`.
pub fn default_mu_values() -> Vec<f64> {
    (0..=10).map(|j| 1.0 + 0.1 * j as f64).collect()
}
