//! On-disk formats: the binary matrix file, key=value sidecars and CSV helpers.
//!
//! Matrix files start with the magic bytes `SYMP`, a little-endian `u32`
//! version (currently 1) and two little-endian `u64` counts (rows, cols),
//! followed by `rows * cols` little-endian IEEE doubles in row-major order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::numerics::{MatRef, RMat};
use crate::symplectic::{OrthoSymplecticBasis, SnapshotMatrix};

pub const MAGIC: &[u8; 4] = b"SYMP";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: u64 = 4 + 4 + 8 + 8;

pub fn write_matrix(path: &Path, m: MatRef<'_, f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<RMat> {
    let file = File::open(path)?;
    let len = file.metadata()?.len();
    let mut r = BufReader::new(file);
    let bad = |msg: String| Error::Format(format!("{}: {msg}", path.display()));

    if len < HEADER_LEN {
        return Err(bad(format!(
            "file is {len} bytes, shorter than the {HEADER_LEN}-byte header"
        )));
    }
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("missing SYMP magic".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != FORMAT_VERSION {
        return Err(bad(format!("unsupported format version {version}")));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let rows = u64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let cols = u64::from_le_bytes(b8);
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| bad(format!("declared size {rows} x {cols} overflows")))?;
    if expected != len {
        return Err(bad(format!(
            "declared size {rows} x {cols} needs {expected} bytes, file has {len}"
        )));
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let mut m = RMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut b8)?;
            m[(i, j)] = f64::from_le_bytes(b8);
        }
    }
    Ok(m)
}

pub fn write_snapshots(path: &Path, xs: &SnapshotMatrix) -> Result<()> {
    write_matrix(path, xs.data())
}

pub fn read_snapshots(path: &Path) -> Result<SnapshotMatrix> {
    SnapshotMatrix::new(read_matrix(path)?)
}

/// Stores the `2N x k` block `E = [VQ; VP]`, which determines the whole basis.
pub fn write_basis(path: &Path, basis: &OrthoSymplecticBasis) -> Result<()> {
    write_matrix(path, basis.e().as_ref())
}

pub fn read_basis(path: &Path) -> Result<OrthoSymplecticBasis> {
    let e = read_matrix(path)?;
    OrthoSymplecticBasis::from_e(e.as_ref(), OrthoSymplecticBasis::INPUT_TOL)
}

/// Path of the key=value sidecar that accompanies a data file.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Ordered key=value metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta(pub BTreeMap<String, String>);

impl Meta {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("metadata line {} has no `=`", n + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Formats a float for CSV output: shortest round-trip scientific notation,
/// `inf`/`NaN` for the non-finite values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Writes a header and rows, checking that every row matches the header width.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Format(format!(
                "row with {} fields for a {}-column table",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV file into its header and records.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Format(format!("{other:?}")),
        }
    } else {
        Error::Format(e.to_string())
    }
}
