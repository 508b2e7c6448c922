//! Command-line front end of the `symrom` binary.
//!
//! ```text
//! symrom snapshots   generate wave-model snapshots       -> snapshots.symp (+ .meta)
//! symrom basis       build one basis, timed               -> basis_*.symp (+ .meta)
//! symrom bench       runtime sweep                        -> runtimes.csv
//! symrom bounds      error/bound/effectivity sweep        -> bounds.csv, bounds_mean.csv
//! symrom rom         full vs reduced simulation           -> rom.csv
//! symrom figures     plot tables from the sweep CSVs      -> fig{1..4}_q*.dat
//! ```
//!
//! Exit codes: 0 success, 2 invalid arguments or input, 3 rank deficiency,
//! 4 singular value gap too small, 5 bound assumption violated, 6 I/O or file
//! format, 7 numerical failure.

pub mod commands;
pub mod config;
pub mod figures;
pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{ExitCode, Result};
use crate::sketching::SketchKind;
use commands::{BasisRequest, BOUNDS_FILE, BOUNDS_MEAN_FILE, ROM_FILE, RUNTIMES_FILE, SNAPSHOT_FILE};
use config::{resolve_output_dir, ConfigFile, Method, ModelArgs, Oversampling, SweepArgs};

#[derive(Debug, Parser)]
#[command(
    name = "symrom",
    version,
    about = "Symplectic basis generation and reduced-order wave simulations"
)]
pub struct Cli {
    /// TOML config with [model], [sweep] and [run] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $SYMROM_OUTPUT_DIR, then ./results).
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the wave model for every training speed and store the snapshots.
    Snapshots {
        #[command(flatten)]
        model: ModelArgs,
        /// Snapshot file (default: <output-dir>/snapshots.symp).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one ortho-symplectic basis and record its median runtime.
    Basis {
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p_ovs: Option<Oversampling>,
        #[arg(long)]
        q_pow: Option<usize>,
        /// Sketch seed; required for the randomized methods.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sketch: Option<SketchKind>,
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        stabilize: Option<bool>,
        #[arg(long)]
        repeat: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time cSVD and the randomized method over a sweep.
    Bench {
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Evaluate projection errors, bounds and effectivities over a sweep.
    Bounds {
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compare full and reduced simulations at the test speed.
    Rom {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        basis: PathBuf,
        /// Keep only the first k symplectic pairs of the stored basis.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn bounds_mean.csv and runtimes.csv into plot tables.
    Figures {
        /// Directory with the sweep CSVs (default: the output directory).
        #[arg(long)]
        results: Option<PathBuf>,
        /// Where to write the tables (default: the results directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::Argument as i32 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::Success as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    let file = load_config(cli.config.as_deref())?;
    let out_dir = resolve_output_dir(cli.output_dir.as_deref(), &file.run);
    let snapshot_path = |flag: &Option<PathBuf>| flag.clone().unwrap_or_else(|| out_dir.join(SNAPSHOT_FILE));

    match &cli.command {
        Command::Snapshots { model, out } => {
            let spec = model.resolve(&file.model)?;
            let path = out.clone().unwrap_or_else(|| out_dir.join(SNAPSHOT_FILE));
            let (path, xs) = commands::cmd_snapshots(&spec, &path)?;
            println!(
                "wrote {} ({} x {}, {} speeds)",
                path.display(),
                xs.data().nrows(),
                xs.n_s(),
                spec.mu.len()
            );
        }
        Command::Basis {
            snapshots,
            method,
            k,
            p_ovs,
            q_pow,
            seed,
            sketch,
            stabilize,
            repeat,
            out,
        } => {
            let xs = io::read_snapshots(&snapshot_path(snapshots))?;
            let first = |v: &Option<Vec<usize>>| v.as_ref().and_then(|v| v.first().copied());
            let k = k.or(first(&file.sweep.k)).unwrap_or(10);
            let p_spec = p_ovs
                .or_else(|| file.sweep.p_ovs.as_ref().and_then(|v| v.first().copied()))
                .unwrap_or(Oversampling::Fixed(5));
            let method = method.or(file.run.method).unwrap_or(Method::Rcsvd);
            let req = BasisRequest {
                method,
                k,
                p_ovs: if method.is_randomized() {
                    p_spec.resolve(k, xs.n_s())?
                } else {
                    0
                },
                q_pow: q_pow.or(first(&file.sweep.q_pow)).unwrap_or(0),
                seed: seed.or_else(|| file.sweep.seeds.as_ref().and_then(|v| v.first().copied())),
                sketch: sketch.or(file.run.sketch).unwrap_or_default(),
                stabilize: stabilize.or(file.run.stabilize).unwrap_or(false),
            };
            let repeat = repeat.or(file.run.repeat).unwrap_or(5);
            let path = out
                .clone()
                .unwrap_or_else(|| out_dir.join(commands::basis_file_name(&req)));
            let (basis, med) = commands::cmd_basis(&xs, &req, repeat, &path)?;
            println!(
                "wrote {} ({} x {}), median {:.6} s over {repeat} runs",
                path.display(),
                2 * basis.n_half(),
                2 * basis.k(),
                med
            );
        }
        Command::Bench { snapshots, sweep } => {
            let spec = sweep.resolve(&file.sweep, &file.run)?;
            let xs = io::read_snapshots(&snapshot_path(snapshots))?;
            let rows = commands::cmd_bench(&xs, &spec, &out_dir)?;
            println!("wrote {} ({} rows)", out_dir.join(RUNTIMES_FILE).display(), rows.len());
        }
        Command::Bounds { snapshots, sweep } => {
            let spec = sweep.resolve(&file.sweep, &file.run)?;
            let xs = io::read_snapshots(&snapshot_path(snapshots))?;
            let (rows, skipped) = commands::cmd_bounds(&xs, &spec, &out_dir)?;
            for s in &skipped {
                eprintln!("skipped {s}");
            }
            let flagged = rows.iter().filter(|r| r.report.assumption_violated).count();
            println!(
                "wrote {} and {} ({} rows, {} with an assumption violation, {} skipped)",
                out_dir.join(BOUNDS_FILE).display(),
                out_dir.join(BOUNDS_MEAN_FILE).display(),
                rows.len(),
                flagged,
                skipped.len()
            );
        }
        Command::Rom { model, basis, k, out } => {
            let spec = model.resolve(&file.model)?;
            let mut b = io::read_basis(basis)?;
            if let Some(k) = k {
                b = commands::truncate_basis(&b, *k)?;
            }
            let path = out.clone().unwrap_or_else(|| out_dir.join(ROM_FILE));
            let cmp = commands::cmd_rom(&spec, &b, &path)?;
            println!(
                "wrote {}: mu = {}, k = {}, max error {:.3e}, integrated error {:.3e}, energy drift fom {:.1e} rom {:.1e}",
                path.display(),
                spec.mu_test,
                b.k(),
                cmp.max_error,
                cmp.integrated_error,
                cmp.fom_drift,
                cmp.rom_drift
            );
        }
        Command::Figures { results, out } => {
            let results = results.clone().unwrap_or_else(|| out_dir.clone());
            let target = out.clone().unwrap_or_else(|| results.clone());
            let written = figures::cmd_figures(&results, &target)?;
            for p in written {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["symrom", "frobnicate"]), 2);
        assert_eq!(run(["symrom", "--help"]), 0);
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        // empty results directory
        assert_eq!(run(["symrom", "figures", "--results", d]), 6);
        // randomized sweep without seeds
        assert_eq!(run(["symrom", "--output-dir", d, "bounds"]), 2);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let cfg = dir.path().join("run.toml");
        std::fs::write(
            &cfg,
            "[model]\nn_xi1 = 4\nn_xi2 = 12\ngrid = \"interior-only\"\nnt = 20\nmu = [1.0, 2.0]\n\
             [sweep]\nk = [3]\np_ovs = [2]\nq_pow = [0, 1]\nseeds = [1, 2]\n[run]\nrepeat = 1\n",
        )
        .unwrap();
        let c = cfg.to_str().unwrap();
        let go = |args: &[&str]| {
            let mut v = vec!["symrom", "--config", c, "--output-dir", d];
            v.extend_from_slice(args);
            run(v)
        };
        assert_eq!(go(&["snapshots"]), 0);
        let snap1 = std::fs::read(dir.path().join(SNAPSHOT_FILE)).unwrap();
        assert_eq!(snap1.len(), 24 + 8 * 96 * 40);
        assert_eq!(go(&["bounds"]), 0);
        assert_eq!(go(&["bench"]), 0);
        assert_eq!(go(&["figures"]), 0);
        let b1 = std::fs::read(dir.path().join(BOUNDS_FILE)).unwrap();
        let f1 = std::fs::read(dir.path().join("fig1_q1.dat")).unwrap();
        assert_eq!(go(&["snapshots"]), 0);
        assert_eq!(go(&["bounds"]), 0);
        assert_eq!(go(&["figures"]), 0);
        assert_eq!(std::fs::read(dir.path().join(SNAPSHOT_FILE)).unwrap(), snap1);
        assert_eq!(std::fs::read(dir.path().join(BOUNDS_FILE)).unwrap(), b1);
        assert_eq!(std::fs::read(dir.path().join("fig1_q1.dat")).unwrap(), f1);

        assert_eq!(go(&["basis", "--method", "csvd", "--k", "5"]), 0);
        let basis = dir.path().join("basis_csvd_k5.symp");
        assert!(basis.is_file());
        assert_eq!(go(&["rom", "--basis", basis.to_str().unwrap(), "--k", "4"]), 0);
        let (header, rows) = io::read_csv(&dir.path().join(ROM_FILE)).unwrap();
        assert_eq!(header, commands::ROM_COLUMNS);
        assert_eq!(rows.len(), 21);
        // more pairs than snapshots is rejected up front
        assert_eq!(go(&["basis", "--method", "csvd", "--k", "48"]), 2);
    }
}
