//! The `symrom` binary as a user runs it.

use std::path::Path;
use std::process::{Command, Output};

use symrom::cli::commands::{BOUNDS_COLUMNS, SNAPSHOT_FILE};
use symrom::cli::io::{read_csv, read_snapshots, Meta};

const TINY: &str = "[model]\nn_xi1 = 4\nn_xi2 = 12\ngrid = \"interior-only\"\nnt = 20\nmu = [1.0, 2.0]\n\
                    [sweep]\nk = [3]\np_ovs = [2]\nq_pow = [0]\nseeds = [7]\n[run]\nrepeat = 1\n";

fn symrom(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symrom"));
    cmd.args(args).env_remove("SYMROM_OUTPUT_DIR");
    if let Some(d) = env_dir {
        cmd.env("SYMROM_OUTPUT_DIR", d);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn output_directory_comes_from_the_environment_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.toml");
    std::fs::write(&cfg, TINY).unwrap();
    let env_dir = dir.path().join("from_env");
    let flag_dir = dir.path().join("from_flag");

    let o = symrom(&["--config", cfg.to_str().unwrap(), "snapshots"], Some(&env_dir));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(env_dir.join(SNAPSHOT_FILE).is_file());

    let o = symrom(
        &[
            "--config",
            cfg.to_str().unwrap(),
            "--output-dir",
            flag_dir.to_str().unwrap(),
            "snapshots",
        ],
        Some(&env_dir),
    );
    assert_eq!(code(&o), 0);
    let xs = read_snapshots(&flag_dir.join(SNAPSHOT_FILE)).unwrap();
    assert_eq!((xs.n_half(), xs.n_s()), (48, 40));
    let meta = Meta::read(&flag_dir.join(format!("{SNAPSHOT_FILE}.meta"))).unwrap();
    assert_eq!(meta.get("format"), Some("SYMP"));
}

#[test]
fn bounds_sweep_writes_the_documented_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = dir.path().join("tiny.toml");
    std::fs::write(&cfg, TINY).unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&symrom(&["--config", c, "--output-dir", d, "snapshots"], None)), 0);
    let o = symrom(&["--config", c, "--output-dir", d, "bounds", "--seed", "1,2,3"], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("bounds.csv")).unwrap();
    assert_eq!(header, BOUNDS_COLUMNS);
    assert_eq!(rows.len(), 3);
    let (_, means) = read_csv(&dir.path().join("bounds_mean.csv")).unwrap();
    assert_eq!(means.len(), 1);
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();

    // unknown flag
    assert_eq!(code(&symrom(&["basis", "--frobnicate"], None)), 2);

    // corrupted snapshot file
    let bad = dir.path().join("bad.symp");
    std::fs::write(&bad, b"SYMP garbage").unwrap();
    let o = symrom(
        &[
            "--output-dir",
            d,
            "basis",
            "--snapshots",
            bad.to_str().unwrap(),
            "--method",
            "csvd",
        ],
        None,
    );
    assert_eq!(code(&o), 6);
    assert!(!o.stderr.is_empty());

    // missing file
    let o = symrom(&["--output-dir", d, "bounds", "--seed", "1"], None);
    assert_eq!(code(&o), 6);

    // unknown config key
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "[model]\nn_xi3 = 4\n").unwrap();
    assert_eq!(
        code(&symrom(&["--config", cfg.to_str().unwrap(), "snapshots"], None)),
        2
    );
}
