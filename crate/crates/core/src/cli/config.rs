//! Run configuration: a sectioned TOML file whose every key has a matching
//! command-line flag. Flags take precedence over the file, the file over
//! built-in defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sketching::{srft_threshold, SketchKind};
use crate::wave2d::{default_mu_values, GridConvention, WaveModelConfig};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SYMROM_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// Basis construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Csvd,
    Rcsvd,
    RcsvdReal,
}

impl Method {
    pub fn is_randomized(self) -> bool {
        self != Method::Csvd
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Csvd => "csvd",
            Method::Rcsvd => "rcsvd",
            Method::RcsvdReal => "rcsvd-real",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csvd" => Ok(Method::Csvd),
            "rcsvd" => Ok(Method::Rcsvd),
            "rcsvd-real" => Ok(Method::RcsvdReal),
            other => Err(Error::arg(format!(
                "unknown method `{other}` (csvd, rcsvd, rcsvd-real)"
            ))),
        }
    }
}

/// Oversampling as given by the user: a number, or `threshold` for the
/// smallest sketch size with an SRFT guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Oversampling {
    Fixed(usize),
    Threshold,
}

impl Oversampling {
    /// Concrete `p_ovs` for basis size `k` and `n_s` snapshots.
    pub fn resolve(self, k: usize, n_s: usize) -> Result<usize> {
        match self {
            Oversampling::Fixed(p) => Ok(p),
            Oversampling::Threshold => Ok(srft_threshold(k, n_s)?.saturating_sub(k)),
        }
    }

    pub fn label(self) -> String {
        match self {
            Oversampling::Fixed(p) => p.to_string(),
            Oversampling::Threshold => "threshold".into(),
        }
    }
}

impl FromStr for Oversampling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "threshold" {
            return Ok(Oversampling::Threshold);
        }
        s.parse()
            .map(Oversampling::Fixed)
            .map_err(|_| Error::arg(format!("p_ovs must be a count or `threshold`, got `{s}`")))
    }
}

impl<'de> Deserialize<'de> for Oversampling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Token(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(p) => Ok(Oversampling::Fixed(p)),
            Raw::Token(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Desk,
    Paper,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper" | "full" => Ok(Profile::Paper),
            other => Err(Error::arg(format!("unknown profile `{other}` (desk, paper)"))),
        }
    }
}

/// Contents of a config file. Every section and key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub run: RunSection,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::arg(format!("config: {e}")))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub profile: Option<Profile>,
    pub n_xi1: Option<usize>,
    pub n_xi2: Option<usize>,
    pub grid: Option<GridConvention>,
    pub extent_xi1: Option<f64>,
    pub extent_xi2: Option<f64>,
    pub u0_sup: Option<f64>,
    pub bump_center_offset: Option<f64>,
    pub nt: Option<usize>,
    pub mu: Option<Vec<f64>>,
    pub mu_test: Option<f64>,
    pub include_initial: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub k: Option<Vec<usize>>,
    pub p_ovs: Option<Vec<Oversampling>>,
    pub q_pow: Option<Vec<usize>>,
    pub seeds: Option<Vec<u64>>,
    pub s: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub method: Option<Method>,
    pub output_dir: Option<PathBuf>,
    pub repeat: Option<usize>,
    pub sketch: Option<SketchKind>,
    pub stabilize: Option<bool>,
}

/// Model flags; each overrides the `[model]` key of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Base grid and step count: desk (10 x 60 interior, 150 steps) or paper.
    #[arg(long)]
    pub profile: Option<Profile>,
    /// Grid nodes along the short side.
    #[arg(long)]
    pub n_xi1: Option<usize>,
    /// Grid nodes along the long side.
    #[arg(long)]
    pub n_xi2: Option<usize>,
    /// includes-boundary or interior-only.
    #[arg(long)]
    pub grid: Option<GridConvention>,
    /// Domain length along the short side.
    #[arg(long)]
    pub extent_xi1: Option<f64>,
    /// Domain length along the long side.
    #[arg(long)]
    pub extent_xi2: Option<f64>,
    /// Support width of the initial bump.
    #[arg(long)]
    pub u0_sup: Option<f64>,
    /// Shift `l` of the bump argument; the default 3 centres the bump at xi2 = -0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub bump_center_offset: Option<f64>,
    /// Time steps per trajectory.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Training wave speeds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<f64>>,
    /// Wave speed of the ROM test run.
    #[arg(long)]
    pub mu_test: Option<f64>,
    /// Keep the initial state as the first snapshot of every trajectory.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub include_initial: Option<bool>,
}

/// Fully resolved model settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub wave: WaveModelConfig,
    pub mu: Vec<f64>,
    pub mu_test: f64,
    pub include_initial: bool,
}

impl ModelArgs {
    pub fn resolve(&self, file: &ModelSection) -> Result<ModelSpec> {
        let profile = self.profile.or(file.profile).unwrap_or_default();
        let base = match profile {
            Profile::Desk => WaveModelConfig::desk(),
            Profile::Paper => WaveModelConfig::paper(),
        };
        let wave = WaveModelConfig {
            n_xi1: self.n_xi1.or(file.n_xi1).unwrap_or(base.n_xi1),
            n_xi2: self.n_xi2.or(file.n_xi2).unwrap_or(base.n_xi2),
            grid: self.grid.or(file.grid).unwrap_or(base.grid),
            extent_xi1: self.extent_xi1.or(file.extent_xi1).unwrap_or(base.extent_xi1),
            extent_xi2: self.extent_xi2.or(file.extent_xi2).unwrap_or(base.extent_xi2),
            u0_sup: self.u0_sup.or(file.u0_sup).unwrap_or(base.u0_sup),
            bump_center_offset: self
                .bump_center_offset
                .or(file.bump_center_offset)
                .unwrap_or(base.bump_center_offset),
            nt: self.nt.or(file.nt).unwrap_or(base.nt),
            ..base
        };
        wave.validate()?;
        let mu = self
            .mu
            .clone()
            .or_else(|| file.mu.clone())
            .unwrap_or_else(default_mu_values);
        if mu.is_empty() || mu.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
            return Err(Error::arg("mu values must be a non-empty list of positive numbers"));
        }
        let mu_test = self.mu_test.or(file.mu_test).unwrap_or(1.5);
        if !(mu_test > 0.0 && mu_test.is_finite()) {
            return Err(Error::arg(format!("mu_test must be positive, got {mu_test}")));
        }
        Ok(ModelSpec {
            wave,
            mu,
            mu_test,
            include_initial: self.include_initial.or(file.include_initial).unwrap_or(false),
        })
    }
}

/// Sweep flags shared by `bounds` and `bench`.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Basis sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    /// Oversampling values; `threshold` picks the SRFT guarantee size.
    #[arg(long, value_delimiter = ',')]
    pub p_ovs: Option<Vec<Oversampling>>,
    #[arg(long, value_delimiter = ',')]
    pub q_pow: Option<Vec<usize>>,
    /// Sketch seeds, comma separated. Required, here or in the config.
    #[arg(long = "seed", alias = "seeds", value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Row split for the advanced deterministic bound.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub method: Option<Method>,
    /// srft or gaussian.
    #[arg(long)]
    pub sketch: Option<SketchKind>,
    /// Re-orthonormalize between power iterations.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub stabilize: Option<bool>,
    /// Timing repetitions (the median is reported).
    #[arg(long)]
    pub repeat: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub k: Vec<usize>,
    pub p_ovs: Vec<Oversampling>,
    pub q_pow: Vec<usize>,
    pub seeds: Vec<u64>,
    pub s: usize,
    pub method: Method,
    pub sketch: SketchKind,
    pub stabilize: bool,
    pub repeat: usize,
}

impl SweepSpec {
    /// Defaults matching the desk profile, with the given seeds.
    pub fn desk(seeds: Vec<u64>) -> Self {
        Self {
            k: vec![10, 20, 40],
            p_ovs: vec![Oversampling::Fixed(5), Oversampling::Fixed(20), Oversampling::Threshold],
            q_pow: vec![0, 2, 5],
            seeds,
            s: 0,
            method: Method::Rcsvd,
            sketch: SketchKind::Srft,
            stabilize: false,
            repeat: 5,
        }
    }
}

impl SweepArgs {
    pub fn resolve(&self, file: &SweepSection, run: &RunSection) -> Result<SweepSpec> {
        let seeds = self
            .seeds
            .clone()
            .or_else(|| file.seeds.clone())
            .ok_or_else(|| Error::arg("seeds must be given explicitly (--seed 1,2,3 or `seeds` in [sweep])"))?;
        let d = SweepSpec::desk(seeds);
        let spec = SweepSpec {
            k: self.k.clone().or_else(|| file.k.clone()).unwrap_or(d.k),
            p_ovs: self.p_ovs.clone().or_else(|| file.p_ovs.clone()).unwrap_or(d.p_ovs),
            q_pow: self.q_pow.clone().or_else(|| file.q_pow.clone()).unwrap_or(d.q_pow),
            seeds: d.seeds,
            s: self.s.or(file.s).unwrap_or(0),
            method: self.method.or(run.method).unwrap_or(d.method),
            sketch: self.sketch.or(run.sketch).unwrap_or(d.sketch),
            stabilize: self.stabilize.or(run.stabilize).unwrap_or(false),
            repeat: self.repeat.or(run.repeat).unwrap_or(d.repeat),
        };
        for (name, empty) in [
            ("k", spec.k.is_empty()),
            ("p_ovs", spec.p_ovs.is_empty()),
            ("q_pow", spec.q_pow.is_empty()),
            ("seeds", spec.seeds.is_empty()),
        ] {
            if empty {
                return Err(Error::arg(format!("sweep list `{name}` is empty")));
            }
        }
        if spec.repeat == 0 {
            return Err(Error::arg("repeat must be at least 1"));
        }
        Ok(spec)
    }
}

/// Output directory: flag, then config, then the environment, then `results`.
pub fn resolve_output_dir(flag: Option<&Path>, run: &RunSection) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| run.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}
