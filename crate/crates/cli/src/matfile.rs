//! Binary matrix files and CSV spectrum sidecars.
//!
//! Layout: `b"QDWH"`, a version byte (1), rows and cols as little-endian
//! `u64`, then `rows·cols` little-endian `f64` in column-major order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qdwh_core::DenseMatrix;

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"QDWH";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 8 + 8;

pub fn encode(a: &DenseMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * a.data().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(a.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(a.cols() as u64).to_le_bytes());
    for v in a.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> CliResult<DenseMatrix> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(CliError::Format("missing QDWH header".into()));
    }
    if bytes[4] != VERSION {
        return Err(CliError::Format(format!(
            "unsupported matrix file version {}",
            bytes[4]
        )));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"));
    let (rows, cols) = (word(5), word(13));
    let expected = rows
        .checked_mul(cols)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| CliError::Format(format!("dimensions {rows}x{cols} overflow")))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(CliError::Format(format!(
            "{rows}x{cols} payload needs {expected} bytes, found {}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(DenseMatrix::from_col_major(
        rows as usize,
        cols as usize,
        data,
    )?)
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> CliResult<()> {
    fs::write(path, encode(a)).map_err(|e| CliError::io(path, e))
}

pub fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    decode(&fs::read(path).map_err(|e| CliError::io(path, e))?)
}

/// `a.qdwh` → `a.qdwh.csv`.
pub fn sidecar_path(matrix: &Path) -> PathBuf {
    let mut s = matrix.as_os_str().to_owned();
    s.push(".csv");
    PathBuf::from(s)
}

/// Shortest round-trip text, switching to exponent form outside
/// `[1e-5, 1e16)`.
fn shortest(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// `index,value` CSV with 1-based indices. Values use Rust's shortest
/// round-trip formatting, so reading back is exact.
pub fn spectrum_csv(values: &[f64]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "value"])?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([(i + 1).to_string(), shortest(*v)])?;
    }
    w.into_inner().map_err(|e| CliError::Format(e.to_string()))
}

pub fn write_spectrum(path: &Path, values: &[f64]) -> CliResult<()> {
    let bytes = spectrum_csv(values)?;
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(&bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_spectrum(path: &Path) -> CliResult<Vec<f64>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let v = rec
            .get(1)
            .ok_or_else(|| CliError::Format(format!("{}: row without a value", path.display())))?;
        out.push(
            v.trim()
                .parse()
                .map_err(|_| CliError::Format(format!("bad value '{v}'")))?,
        );
    }
    Ok(out)
}
