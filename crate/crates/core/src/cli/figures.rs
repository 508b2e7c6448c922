//! Plot-ready tables built from the sweep CSVs.
//!
//! Every panel becomes one whitespace-separated table: a `#` header line, then
//! one row per basis size with one column per series. Four figures are
//! produced, one panel per power-iteration count:
//!
//! - `fig1_q{q}.dat`: squared projection error of cSVD and of the randomized
//!   basis for each oversampling value;
//! - `fig2_q{q}.dat`: median runtimes, cSVD against the randomized basis;
//! - `fig3_q{q}.dat`: effectivities of the two deterministic bounds;
//! - `fig4_q{q}.dat`: effectivities of the two probabilistic bounds.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use super::commands::{BOUNDS_MEAN_FILE, RUNTIMES_FILE};
use super::io::read_csv;
use crate::error::{Error, Result};

/// A parsed CSV table with by-name column access.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn load(path: &Path) -> Result<Self> {
        let (header, rows) = read_csv(path)?;
        Ok(Self { header, rows })
    }

    fn col(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format(format!("column `{name}` missing")))
    }
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub file_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<(usize, Vec<Option<f64>>)>,
}

impl Panel {
    pub fn render(&self) -> String {
        let mut s = format!("# {}\n", self.columns.join(" "));
        for (k, vals) in &self.rows {
            s.push_str(&k.to_string());
            for v in vals {
                s.push(' ');
                match v {
                    Some(x) => s.push_str(&format!("{x:.10e}")),
                    None => s.push_str("nan"),
                }
            }
            s.push('\n');
        }
        s
    }
}

fn parse_num(s: &str) -> Option<f64> {
    if s.is_empty() {
        None
    } else {
        s.parse().ok()
    }
}

fn mean(vals: &[f64]) -> Option<f64> {
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

/// Distinct values in order of first appearance.
fn ordered_unique(values: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn sorted_numbers(values: impl Iterator<Item = String>) -> Vec<usize> {
    values
        .filter_map(|v| v.parse().ok())
        .collect::<BTreeSet<usize>>()
        .into_iter()
        .collect()
}

/// Builds the bound-derived panels (figures 1, 3 and 4).
fn bound_panels(t: &Table) -> Result<Vec<Panel>> {
    let (ck, cp, cq) = (t.col("k")?, t.col("p_ovs_spec")?, t.col("q_pow")?);
    let labels = ordered_unique(t.rows.iter().map(|r| r[cp].clone()));
    let qs = sorted_numbers(t.rows.iter().map(|r| r[cq].clone()));
    let ks = sorted_numbers(t.rows.iter().map(|r| r[ck].clone()));

    let lookup = |k: usize, label: &str, q: usize, col: usize| -> Option<f64> {
        let vals: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| r[ck] == k.to_string() && r[cp] == label && r[cq] == q.to_string())
            .filter_map(|r| parse_num(&r[col]))
            .collect();
        mean(&vals)
    };
    let any_q = |k: usize, col: usize| -> Option<f64> {
        let vals: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| r[ck] == k.to_string())
            .filter_map(|r| parse_num(&r[col]))
            .collect();
        mean(&vals)
    };

    let (e_sq, tail_sq) = (t.col("e_proj_sq")?, t.col("tail_sq")?);
    let (det, det_adv) = (t.col("eff_det")?, t.col("eff_det_adv")?);
    let (prob, prob_adv) = (t.col("eff_prob")?, t.col("eff_prob_adv")?);

    let mut panels = Vec::new();
    for &q in &qs {
        let mut fig1 = Panel {
            file_name: format!("fig1_q{q}.dat"),
            columns: vec!["k".into(), "csvd".into()],
            rows: Vec::new(),
        };
        fig1.columns.extend(labels.iter().map(|l| format!("rcsvd_p{l}")));
        let mut fig3 = Panel {
            file_name: format!("fig3_q{q}.dat"),
            columns: vec!["k".into()],
            rows: Vec::new(),
        };
        let mut fig4 = Panel {
            file_name: format!("fig4_q{q}.dat"),
            columns: vec!["k".into()],
            rows: Vec::new(),
        };
        for l in &labels {
            fig3.columns.push(format!("det_p{l}"));
            fig3.columns.push(format!("det_adv_p{l}"));
            fig4.columns.push(format!("prob_p{l}"));
            fig4.columns.push(format!("prob_adv_p{l}"));
        }
        for &k in &ks {
            // the cSVD error is the optimal tail, identical for every sketch
            let mut r1 = vec![any_q(k, tail_sq)];
            let mut r3 = Vec::new();
            let mut r4 = Vec::new();
            for l in &labels {
                r1.push(lookup(k, l, q, e_sq));
                r3.push(lookup(k, l, q, det));
                r3.push(lookup(k, l, q, det_adv));
                r4.push(lookup(k, l, q, prob));
                r4.push(lookup(k, l, q, prob_adv));
            }
            fig1.rows.push((k, r1));
            fig3.rows.push((k, r3));
            fig4.rows.push((k, r4));
        }
        panels.extend([fig1, fig3, fig4]);
    }
    Ok(panels)
}

/// Builds the runtime panels (`fig2_q*.dat`).
fn runtime_panels(t: &Table) -> Result<Vec<Panel>> {
    let (cm, ck, cp, cq, ct) = (
        t.col("method")?,
        t.col("k")?,
        t.col("p_ovs_spec")?,
        t.col("q_pow")?,
        t.col("median_seconds")?,
    );
    let randomized: Vec<&Vec<String>> = t.rows.iter().filter(|r| r[cm] != "csvd").collect();
    let labels = ordered_unique(randomized.iter().map(|r| r[cp].clone()));
    let mut qs = sorted_numbers(randomized.iter().map(|r| r[cq].clone()));
    if qs.is_empty() {
        qs.push(0);
    }
    let ks = sorted_numbers(t.rows.iter().map(|r| r[ck].clone()));
    let avg = |pred: &dyn Fn(&Vec<String>) -> bool| -> Option<f64> {
        let vals: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| pred(r))
            .filter_map(|r| parse_num(&r[ct]))
            .collect();
        mean(&vals)
    };
    let mut panels = Vec::new();
    for &q in &qs {
        let mut p = Panel {
            file_name: format!("fig2_q{q}.dat"),
            columns: vec!["k".into(), "csvd".into()],
            rows: Vec::new(),
        };
        p.columns.extend(labels.iter().map(|l| format!("rcsvd_p{l}")));
        for &k in &ks {
            let ks = k.to_string();
            let qs = q.to_string();
            let mut row = vec![avg(&|r| r[cm] == "csvd" && r[ck] == ks)];
            for l in &labels {
                row.push(avg(&|r| r[cm] != "csvd" && r[ck] == ks && r[cp] == *l && r[cq] == qs));
            }
            p.rows.push((k, row));
        }
        panels.push(p);
    }
    Ok(panels)
}

/// Reads the sweep tables in `results` and returns every panel.
///
/// All inputs are checked before anything is built; missing files are
/// reported together.
pub fn build_panels(results: &Path) -> Result<Vec<Panel>> {
    let inputs: Vec<PathBuf> = [BOUNDS_MEAN_FILE, RUNTIMES_FILE]
        .iter()
        .map(|f| results.join(f))
        .collect();
    let missing: Vec<String> = inputs
        .iter()
        .filter(|p| !p.is_file())
        .map(|p| p.display().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("missing inputs: {}", missing.join(", ")),
        )));
    }
    let mut panels = bound_panels(&Table::load(&inputs[0])?)?;
    panels.extend(runtime_panels(&Table::load(&inputs[1])?)?);
    panels.sort_by(|a, b| a.file_name.cmp(&b.file_name));
    Ok(panels)
}

/// `figures`: writes every panel into `out`, only once all of them are built.
pub fn cmd_figures(results: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let panels = build_panels(results)?;
    std::fs::create_dir_all(out)?;
    let mut written = Vec::with_capacity(panels.len());
    for p in &panels {
        let path = out.join(&p.file_name);
        std::fs::write(&path, p.render())?;
        written.push(path);
    }
    Ok(written)
}
