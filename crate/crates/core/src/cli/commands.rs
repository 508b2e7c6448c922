//! The work behind each subcommand, callable without going through argv.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Method, ModelSpec, Oversampling, SweepSpec};
use super::io::{fmt_f64, fmt_opt, meta_path, write_basis, write_csv, write_snapshots, Meta};
use crate::bounds::{bound_report, BoundReport, SnapshotSvd};
use crate::error::{Error, Result};
use crate::numerics::Mat;
use crate::sketching::{SketchConfig, SketchKind};
use crate::symplectic::{csvd, rcsvd_real_with_sketch, rcsvd_with_sketch, OrthoSymplecticBasis, SnapshotMatrix};
use crate::wave2d::{build_system, collect_snapshots, implicit_midpoint, initial_state, reduce, simulate};

pub const SNAPSHOT_FILE: &str = "snapshots.symp";
pub const BOUNDS_FILE: &str = "bounds.csv";
pub const BOUNDS_MEAN_FILE: &str = "bounds_mean.csv";
pub const RUNTIMES_FILE: &str = "runtimes.csv";
pub const ROM_FILE: &str = "rom.csv";

pub const BOUNDS_COLUMNS: &[&str] = &[
    "method",
    "k",
    "p_ovs_spec",
    "p_ovs",
    "l",
    "q_pow",
    "s",
    "seed",
    "stabilized",
    "e_proj_frob",
    "e_proj_sq",
    "tail",
    "tail_sq",
    "eta_det",
    "eta_det_adv",
    "eta_det_adv_sharp",
    "eta_prob",
    "eta_prob_adv",
    "eff_det",
    "eff_det_adv",
    "eff_det_adv_sharp",
    "eff_prob",
    "eff_prob_adv",
    "eff_literal_det",
    "eff_literal_det_adv",
    "eff_literal_prob",
    "eff_literal_prob_adv",
    "rho",
    "rho_adv",
    "alpha",
    "gamma",
    "c_quasi_opt",
    "failure_prob",
    "threshold_met",
    "assumption_violated",
    "zero_error",
    "bound_violated",
];

/// Columns averaged over seeds in the aggregate table.
pub const MEAN_VALUE_COLUMNS: &[&str] = &[
    "e_proj_frob",
    "e_proj_sq",
    "tail",
    "tail_sq",
    "eta_det",
    "eta_det_adv",
    "eta_det_adv_sharp",
    "eta_prob",
    "eta_prob_adv",
    "eff_det",
    "eff_det_adv",
    "eff_det_adv_sharp",
    "eff_prob",
    "eff_prob_adv",
];

pub const MEAN_KEY_COLUMNS: &[&str] = &[
    "method",
    "k",
    "p_ovs_spec",
    "p_ovs",
    "l",
    "q_pow",
    "s",
    "n_seeds",
    "n_assumption_violated",
    "n_bound_violated",
];

pub const RUNTIME_COLUMNS: &[&str] = &[
    "method",
    "k",
    "p_ovs_spec",
    "p_ovs",
    "l",
    "q_pow",
    "seed",
    "repeat",
    "median_seconds",
    "min_seconds",
];

pub const ROM_COLUMNS: &[&str] = &["step", "time", "error_l2", "rel_error_l2", "energy_fom", "energy_rom"];

pub fn mean_columns() -> Vec<&'static str> {
    MEAN_KEY_COLUMNS.iter().chain(MEAN_VALUE_COLUMNS).copied().collect()
}

/// Generates the training snapshots of `model`.
pub fn generate_snapshots(model: &ModelSpec) -> Result<SnapshotMatrix> {
    collect_snapshots(&model.wave, &model.mu, model.wave.nt, model.include_initial)
}

pub fn snapshot_meta(model: &ModelSpec, xs: &SnapshotMatrix) -> Meta {
    let w = &model.wave;
    let grid = match w.grid {
        crate::wave2d::GridConvention::IncludesBoundary => "includes-boundary",
        crate::wave2d::GridConvention::InteriorOnly => "interior-only",
    };
    let mu: Vec<String> = model.mu.iter().map(f64::to_string).collect();
    let mut m = Meta::new();
    m.set("format", "SYMP")
        .set("version", super::io::FORMAT_VERSION)
        .set("rows", xs.data().nrows())
        .set("cols", xs.n_s())
        .set("n_xi1", w.n_xi1)
        .set("n_xi2", w.n_xi2)
        .set("grid", grid)
        .set("extent_xi1", w.extent_xi1)
        .set("extent_xi2", w.extent_xi2)
        .set("u0_sup", w.u0_sup)
        .set("bump_center_offset", w.bump_center_offset)
        .set("t0", w.t0)
        .set("nt", w.nt)
        .set("mu", mu.join(","))
        .set("include_initial", model.include_initial);
    m
}

/// `snapshots`: writes the matrix and its sidecar, returns the file path.
pub fn cmd_snapshots(model: &ModelSpec, out: &Path) -> Result<(PathBuf, SnapshotMatrix)> {
    let xs = generate_snapshots(model)?;
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir)?;
    }
    write_snapshots(out, &xs)?;
    snapshot_meta(model, &xs).write(&meta_path(out))?;
    Ok((out.to_path_buf(), xs))
}

/// One basis request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisRequest {
    pub method: Method,
    pub k: usize,
    pub p_ovs: usize,
    pub q_pow: usize,
    pub seed: Option<u64>,
    pub sketch: SketchKind,
    pub stabilize: bool,
}

impl BasisRequest {
    fn sketch_config(&self) -> Result<SketchConfig> {
        let seed = self
            .seed
            .ok_or_else(|| Error::arg(format!("--seed is required for method {}", self.method)))?;
        Ok(SketchConfig {
            kind: self.sketch,
            stabilize: self.stabilize,
            ..SketchConfig::new(self.k, self.p_ovs, self.q_pow, seed)
        })
    }
}

/// Builds one basis. Sketch construction is part of the computation.
pub fn build_basis(xs: &SnapshotMatrix, req: &BasisRequest) -> Result<OrthoSymplecticBasis> {
    match req.method {
        Method::Csvd => csvd(xs, req.k),
        Method::Rcsvd | Method::RcsvdReal => {
            let cfg = req.sketch_config()?;
            cfg.validate(xs.n_half(), xs.n_s())?;
            let omega = cfg.draw(xs.n_s())?;
            if req.method == Method::Rcsvd {
                rcsvd_with_sketch(xs, &cfg, &omega)
            } else {
                rcsvd_real_with_sketch(xs, &cfg, &omega)
            }
        }
    }
}

/// Randomized basis from a drawn sketch. When plain power iterations lose
/// numerical rank, the cell is recomputed with re-orthonormalization, which
/// spans the same space in exact arithmetic. The flag reports the retry.
pub fn randomized_basis_with_fallback(
    xs: &SnapshotMatrix,
    method: Method,
    cfg: &SketchConfig,
    omega: &crate::sketching::Sketch,
) -> Result<(OrthoSymplecticBasis, bool)> {
    let build = |c: &SketchConfig| match method {
        Method::RcsvdReal => rcsvd_real_with_sketch(xs, c, omega),
        _ => rcsvd_with_sketch(xs, c, omega),
    };
    match build(cfg) {
        Err(Error::Rank { .. }) if !cfg.stabilize && cfg.q_pow > 0 => {
            let stable = SketchConfig {
                stabilize: true,
                ..*cfg
            };
            Ok((build(&stable)?, true))
        }
        other => other.map(|b| (b, false)),
    }
}

/// Wall-clock timings of `repeat` runs of `f`, with the first result.
pub fn timed<T>(repeat: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Vec<f64>)> {
    if repeat == 0 {
        return Err(Error::arg("repeat must be at least 1"));
    }
    let mut first = None;
    let mut times = Vec::with_capacity(repeat);
    for _ in 0..repeat {
        let start = Instant::now();
        let value = f()?;
        times.push(start.elapsed().as_secs_f64());
        first.get_or_insert(value);
    }
    Ok((first.expect("repeat >= 1"), times))
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn basis_file_name(req: &BasisRequest) -> String {
    match (req.method, req.seed) {
        (Method::Csvd, _) | (_, None) => format!("basis_{}_k{}.symp", req.method, req.k),
        (m, Some(seed)) => format!("basis_{m}_k{}_p{}_q{}_seed{seed}.symp", req.k, req.p_ovs, req.q_pow),
    }
}

/// `basis`: builds, times and stores a basis. Returns the median runtime.
pub fn cmd_basis(
    xs: &SnapshotMatrix,
    req: &BasisRequest,
    repeat: usize,
    out: &Path,
) -> Result<(OrthoSymplecticBasis, f64)> {
    let (basis, times) = timed(repeat, || build_basis(xs, req))?;
    let med = median(&times);
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir)?;
    }
    write_basis(out, &basis)?;
    let mut m = Meta::new();
    m.set("format", "SYMP")
        .set("content", "E=[VQ;VP]")
        .set("rows", 2 * basis.n_half())
        .set("cols", basis.k())
        .set("method", req.method)
        .set("k", req.k)
        .set("repeat", repeat)
        .set("median_seconds", fmt_f64(med));
    if req.method.is_randomized() {
        m.set("p_ovs", req.p_ovs)
            .set("q_pow", req.q_pow)
            .set("seed", req.seed.unwrap_or_default())
            .set("sketch", format!("{:?}", req.sketch).to_lowercase())
            .set("stabilize", req.stabilize);
    }
    m.write(&meta_path(out))?;
    Ok((basis, med))
}

/// One cell of a bounds sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub method: Method,
    pub p_ovs_spec: Oversampling,
    /// Power iterations had to be re-orthonormalized (see
    /// [`randomized_basis_with_fallback`]).
    pub stabilized: bool,
    pub report: BoundReport,
}

/// One sweep cell: the oversampling as requested and the resolved config.
pub type SweepCell = (Oversampling, SketchConfig);

/// Concrete sweep cells, in sweep order (k, p_ovs, q_pow, seed). Cells whose
/// sketch would not fit in `n_s` columns are returned separately.
pub fn sweep_cells(
    spec: &SweepSpec,
    n_half: usize,
    n_s: usize,
) -> Result<(Vec<SweepCell>, Vec<String>)> {
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &k in &spec.k {
        for &p in &spec.p_ovs {
            let p_ovs = p.resolve(k, n_s)?;
            for &q in &spec.q_pow {
                for &seed in &spec.seeds {
                    let cfg = SketchConfig {
                        kind: spec.sketch,
                        stabilize: spec.stabilize,
                        s: spec.s.min(p_ovs),
                        ..SketchConfig::new(k, p_ovs, q, seed)
                    };
                    if k + p_ovs > n_s || k > n_half {
                        skipped.push(format!(
                            "k={k} p_ovs={} (l={}) q_pow={q} seed={seed}: does not fit {n_half} x {n_s} snapshots",
                            p.label(),
                            k + p_ovs
                        ));
                        continue;
                    }
                    cells.push((p, cfg));
                }
            }
        }
    }
    Ok((cells, skipped))
}

/// Evaluates every bound over the sweep, in parallel over cells.
pub fn run_bounds(xs: &SnapshotMatrix, spec: &SweepSpec) -> Result<(Vec<BoundRow>, Vec<String>)> {
    if spec.method == Method::Csvd {
        return Err(Error::arg("bounds describe randomized bases; use rcsvd or rcsvd-real"));
    }
    let svd = SnapshotSvd::compute(xs)?;
    let (cells, skipped) = sweep_cells(spec, xs.n_half(), xs.n_s())?;
    let rows = cells
        .par_iter()
        .map(|(p, cfg)| {
            let omega = cfg.draw(xs.n_s())?;
            let (basis, stabilized) = randomized_basis_with_fallback(xs, spec.method, cfg, &omega)?;
            Ok(BoundRow {
                method: spec.method,
                p_ovs_spec: *p,
                stabilized: stabilized || cfg.stabilize,
                report: bound_report(xs, &svd, &basis, &omega, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, skipped))
}

pub fn bound_row_fields(row: &BoundRow) -> Vec<String> {
    let r = &row.report;
    vec![
        row.method.to_string(),
        r.k.to_string(),
        row.p_ovs_spec.label(),
        r.p_ovs.to_string(),
        (r.k + r.p_ovs).to_string(),
        r.q_pow.to_string(),
        r.s.to_string(),
        r.seed.to_string(),
        row.stabilized.to_string(),
        fmt_f64(r.e_proj_frob),
        fmt_f64(r.e_proj_sq),
        fmt_f64(r.tail),
        fmt_f64(r.tail * r.tail),
        fmt_opt(r.eta_det),
        fmt_opt(r.eta_det_adv),
        fmt_opt(r.eta_det_adv_sharp),
        fmt_f64(r.eta_prob),
        fmt_f64(r.eta_prob_adv),
        fmt_opt(r.eff_det),
        fmt_opt(r.eff_det_adv),
        fmt_opt(r.eff_det_adv_sharp),
        fmt_f64(r.eff_prob),
        fmt_f64(r.eff_prob_adv),
        fmt_opt(r.eff_literal_det),
        fmt_opt(r.eff_literal_det_adv),
        fmt_f64(r.eff_literal_prob),
        fmt_f64(r.eff_literal_prob_adv),
        fmt_opt(r.rho),
        fmt_opt(r.rho_adv),
        fmt_f64(r.alpha),
        fmt_f64(r.gamma),
        fmt_f64(r.c_quasi_opt),
        fmt_f64(r.failure_prob),
        r.threshold_met.to_string(),
        r.assumption_violated.to_string(),
        r.zero_error.to_string(),
        r.bound_violated.to_string(),
    ]
}

fn mean_values(r: &BoundReport) -> [Option<f64>; 14] {
    [
        Some(r.e_proj_frob),
        Some(r.e_proj_sq),
        Some(r.tail),
        Some(r.tail * r.tail),
        r.eta_det,
        r.eta_det_adv,
        r.eta_det_adv_sharp,
        Some(r.eta_prob),
        Some(r.eta_prob_adv),
        r.eff_det,
        r.eff_det_adv,
        r.eff_det_adv_sharp,
        Some(r.eff_prob),
        Some(r.eff_prob_adv),
    ]
}

/// Per-cell means over seeds. Missing values are skipped; a column with no
/// values in a group is left empty.
pub fn aggregate_bounds(rows: &[BoundRow]) -> Vec<Vec<String>> {
    let mut groups: Vec<(&BoundRow, Vec<&BoundRow>)> = Vec::new();
    for row in rows {
        let key = |r: &BoundRow| {
            (
                r.method,
                r.report.k,
                r.p_ovs_spec,
                r.report.p_ovs,
                r.report.q_pow,
                r.report.s,
            )
        };
        match groups.iter_mut().find(|(first, _)| key(first) == key(row)) {
            Some((_, members)) => members.push(row),
            None => groups.push((row, vec![row])),
        }
    }
    groups
        .into_iter()
        .map(|(first, members)| {
            let r = &first.report;
            let mut out = vec![
                first.method.to_string(),
                r.k.to_string(),
                first.p_ovs_spec.label(),
                r.p_ovs.to_string(),
                (r.k + r.p_ovs).to_string(),
                r.q_pow.to_string(),
                r.s.to_string(),
                members.len().to_string(),
                members
                    .iter()
                    .filter(|m| m.report.assumption_violated)
                    .count()
                    .to_string(),
                members.iter().filter(|m| m.report.bound_violated).count().to_string(),
            ];
            for c in 0..MEAN_VALUE_COLUMNS.len() {
                let vals: Vec<f64> = members.iter().filter_map(|m| mean_values(&m.report)[c]).collect();
                out.push(if vals.is_empty() {
                    String::new()
                } else {
                    fmt_f64(vals.iter().sum::<f64>() / vals.len() as f64)
                });
            }
            out
        })
        .collect()
}

/// `bounds`: writes the per-trial and aggregate tables into `dir`.
pub fn cmd_bounds(xs: &SnapshotMatrix, spec: &SweepSpec, dir: &Path) -> Result<(Vec<BoundRow>, Vec<String>)> {
    let (rows, skipped) = run_bounds(xs, spec)?;
    std::fs::create_dir_all(dir)?;
    let fields: Vec<Vec<String>> = rows.iter().map(bound_row_fields).collect();
    write_csv(&dir.join(BOUNDS_FILE), BOUNDS_COLUMNS, &fields)?;
    write_csv(&dir.join(BOUNDS_MEAN_FILE), &mean_columns(), &aggregate_bounds(&rows))?;
    Ok((rows, skipped))
}

/// `bench`: median runtimes of cSVD per `k` and of the randomized method per
/// sweep cell. Runs sequentially so timings do not compete for cores.
pub fn cmd_bench(xs: &SnapshotMatrix, spec: &SweepSpec, dir: &Path) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    let time_row = |req: &BasisRequest, spec_label: &str| -> Result<Vec<String>> {
        let (_, times) = timed(spec.repeat, || match req.method {
            Method::Csvd => build_basis(xs, req),
            m => {
                let cfg = req.sketch_config()?;
                let omega = cfg.draw(xs.n_s())?;
                Ok(randomized_basis_with_fallback(xs, m, &cfg, &omega)?.0)
            }
        })?;
        let min = times.iter().copied().fold(f64::INFINITY, f64::min);
        let randomized = req.method.is_randomized();
        let opt = |s: String| if randomized { s } else { String::new() };
        Ok(vec![
            req.method.to_string(),
            req.k.to_string(),
            opt(spec_label.to_string()),
            opt(req.p_ovs.to_string()),
            opt((req.k + req.p_ovs).to_string()),
            opt(req.q_pow.to_string()),
            opt(req.seed.unwrap_or_default().to_string()),
            spec.repeat.to_string(),
            fmt_f64(median(&times)),
            fmt_f64(min),
        ])
    };
    for &k in &spec.k {
        if k > xs.n_half().min(xs.n_s()) {
            continue;
        }
        let base = BasisRequest {
            method: Method::Csvd,
            k,
            p_ovs: 0,
            q_pow: 0,
            seed: None,
            sketch: spec.sketch,
            stabilize: spec.stabilize,
        };
        rows.push(time_row(&base, "")?);
    }
    if spec.method.is_randomized() {
        let (cells, _) = sweep_cells(spec, xs.n_half(), xs.n_s())?;
        for (p, cfg) in cells {
            let req = BasisRequest {
                method: spec.method,
                k: cfg.k,
                p_ovs: cfg.p_ovs,
                q_pow: cfg.q_pow,
                seed: Some(cfg.seed),
                sketch: cfg.kind,
                stabilize: cfg.stabilize,
            };
            rows.push(time_row(&req, &p.label())?);
        }
    }
    std::fs::create_dir_all(dir)?;
    write_csv(&dir.join(RUNTIMES_FILE), RUNTIME_COLUMNS, &rows)?;
    Ok(rows)
}

/// Full-order versus reduced-order run at one parameter value.
#[derive(Debug, Clone)]
pub struct RomComparison {
    pub rows: Vec<Vec<String>>,
    pub errors: Vec<f64>,
    /// `dt * sum_n ||x_n - V x_r,n||_2`.
    pub integrated_error: f64,
    pub max_error: f64,
    pub fom_drift: f64,
    pub rom_drift: f64,
}

/// Integrates the full and the reduced wave model at speed `mu` and compares
/// the states step by step.
pub fn rom_compare(model: &ModelSpec, basis: &OrthoSymplecticBasis, mu: f64) -> Result<RomComparison> {
    let cfg = model.wave.with_speed(mu);
    cfg.validate()?;
    let full = build_system(&cfg)?;
    if full.n_half() != basis.n_half() {
        return Err(Error::arg(format!(
            "basis half dimension {} does not match the model ({})",
            basis.n_half(),
            full.n_half()
        )));
    }
    let fom = simulate(&cfg)?;
    let x0 = initial_state(&cfg)?;
    let xr0 = basis.coordinates(Mat::from_fn(x0.len(), 1, |i, _| x0[i]).as_ref());
    let xr0: Vec<f64> = xr0.col(0).iter().copied().collect();
    let rom_sys = reduce(&full, basis)?;
    let rom = implicit_midpoint(&rom_sys, &xr0, cfg.t0, cfg.t_end(), cfg.nt)?;
    let lifted = basis.lift(rom.states.as_ref());

    let mut rows = Vec::with_capacity(cfg.nt + 1);
    let mut errors = Vec::with_capacity(cfg.nt + 1);
    for n in 0..=cfg.nt {
        let (mut diff, mut norm) = (0.0f64, 0.0f64);
        for i in 0..lifted.nrows() {
            let x = fom.states[(i, n)];
            diff += (x - lifted[(i, n)]).powi(2);
            norm += x * x;
        }
        let (diff, norm) = (diff.sqrt(), norm.sqrt());
        let rel = if norm > 0.0 { diff / norm } else { diff };
        errors.push(diff);
        rows.push(vec![
            n.to_string(),
            fmt_f64(fom.times[n]),
            fmt_f64(diff),
            fmt_f64(rel),
            fmt_f64(fom.hamiltonian[n]),
            fmt_f64(rom.hamiltonian[n]),
        ]);
    }
    let dt = (cfg.t_end() - cfg.t0) / cfg.nt as f64;
    Ok(RomComparison {
        rows,
        integrated_error: dt * errors.iter().sum::<f64>(),
        max_error: errors.iter().copied().fold(0.0, f64::max),
        errors,
        fom_drift: fom.max_relative_drift(),
        rom_drift: rom.max_relative_drift(),
    })
}

/// Keeps the first `k` symplectic pairs of a basis.
pub fn truncate_basis(basis: &OrthoSymplecticBasis, k: usize) -> Result<OrthoSymplecticBasis> {
    if k == 0 || k > basis.k() {
        return Err(Error::arg(format!("cannot keep {k} of {} basis pairs", basis.k())));
    }
    OrthoSymplecticBasis::from_blocks(
        basis.vq().subcols(0, k).to_owned(),
        basis.vp().subcols(0, k).to_owned(),
        OrthoSymplecticBasis::INPUT_TOL,
    )
}

/// `rom`: writes the step-by-step comparison table.
pub fn cmd_rom(model: &ModelSpec, basis: &OrthoSymplecticBasis, out: &Path) -> Result<RomComparison> {
    let cmp = rom_compare(model, basis, model.mu_test)?;
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(out, ROM_COLUMNS, &cmp.rows)?;
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::io::read_csv;
    use crate::wave2d::{GridConvention, WaveModelConfig};

    fn tiny_model() -> ModelSpec {
        ModelSpec {
            wave: WaveModelConfig {
                n_xi1: 4,
                n_xi2: 12,
                grid: GridConvention::InteriorOnly,
                bump_center_offset: 0.0,
                nt: 30,
                ..WaveModelConfig::desk()
            },
            mu: vec![1.0, 1.5, 2.0],
            mu_test: 1.25,
            include_initial: false,
        }
    }

    fn tiny_sweep() -> SweepSpec {
        SweepSpec {
            k: vec![3, 5],
            p_ovs: vec![Oversampling::Fixed(2), Oversampling::Fixed(6)],
            q_pow: vec![0, 1],
            ..SweepSpec::desk(vec![1, 2])
        }
    }

    #[test]
    fn bounds_tables_follow_the_schema() {
        let dir = tempfile::tempdir().unwrap();
        let xs = generate_snapshots(&tiny_model()).unwrap();
        let (rows, skipped) = cmd_bounds(&xs, &tiny_sweep(), dir.path()).unwrap();
        assert!(skipped.is_empty());
        assert_eq!(rows.len(), 2 * 2 * 2 * 2);
        let (header, data) = read_csv(&dir.path().join(BOUNDS_FILE)).unwrap();
        assert_eq!(header, BOUNDS_COLUMNS);
        assert_eq!(data.len(), 16);
        assert!(data.iter().all(|r| r.len() == BOUNDS_COLUMNS.len()));
        let (header, data) = read_csv(&dir.path().join(BOUNDS_MEAN_FILE)).unwrap();
        assert_eq!(header, mean_columns());
        assert_eq!(data.len(), 8);
        assert!(data.iter().all(|r| r[7] == "2"));
        for row in &rows {
            assert!(!row.report.bound_violated, "{:?}", row.report);
        }
    }

    #[test]
    fn mean_rows_average_over_seeds() {
        let xs = generate_snapshots(&tiny_model()).unwrap();
        let (rows, _) = run_bounds(&xs, &tiny_sweep()).unwrap();
        let agg = aggregate_bounds(&rows);
        let col = 10 + MEAN_VALUE_COLUMNS.iter().position(|c| *c == "e_proj_sq").unwrap();
        let expected = 0.5 * (rows[0].report.e_proj_sq + rows[1].report.e_proj_sq);
        let got: f64 = agg[0][col].parse().unwrap();
        assert!((got - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn oversized_cells_are_skipped() {
        let spec = SweepSpec {
            k: vec![4],
            p_ovs: vec![Oversampling::Fixed(1), Oversampling::Fixed(100)],
            q_pow: vec![0],
            ..SweepSpec::desk(vec![1])
        };
        let (cells, skipped) = sweep_cells(&spec, 50, 60).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(skipped.len(), 1);
    }

    #[test]
    fn basis_files_are_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let xs = generate_snapshots(&tiny_model()).unwrap();
        let req = BasisRequest {
            method: Method::Rcsvd,
            k: 4,
            p_ovs: 3,
            q_pow: 1,
            seed: Some(9),
            sketch: SketchKind::Srft,
            stabilize: false,
        };
        let a = dir.path().join("a.symp");
        let b = dir.path().join("b.symp");
        cmd_basis(&xs, &req, 2, &a).unwrap();
        cmd_basis(&xs, &req, 1, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let missing_seed = BasisRequest { seed: None, ..req };
        assert!(matches!(build_basis(&xs, &missing_seed), Err(Error::Argument(_))));
    }

    #[test]
    fn full_basis_rom_is_exact() {
        let model = tiny_model();
        let n = model.wave.n_dof();
        let basis = OrthoSymplecticBasis::from_blocks(
            crate::numerics::RMat::identity(n, n),
            crate::numerics::RMat::zeros(n, n),
            1e-14,
        )
        .unwrap();
        let cmp = rom_compare(&model, &basis, 1.25).unwrap();
        assert!(cmp.max_error <= 1e-10);
        assert_eq!(cmp.rows.len(), model.wave.nt + 1);
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
