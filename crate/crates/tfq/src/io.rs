//! Field files (CSV, 16-bit PGM, TFQ1 binary) and signal sample files.
//!
//! All formats store row `k` = momentum index, column `j` = position index,
//! with the lowest momentum in the first row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use tfq_core::grid::{make_spatial_grid, HBarConfig, PhaseGrid, SpatialGrid};
use tfq_core::harness::log_amplitude;
use tfq_core::{Complex64, PhaseField, Signal, ValueKind};

use crate::config::Format;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"TFQ1";

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes `field` to `{stem}.{ext}` and returns the path.
pub fn write_field(field: &PhaseField, format: Format, stem: &Path) -> Result<PathBuf> {
    let path = stem.with_extension(format.extension());
    let mut w = create(&path)?;
    let res = match format {
        Format::Csv => write_csv(field, &mut w),
        Format::Pgm => write_pgm(field, &mut w),
        Format::Bin => write_binary(field, &mut w),
    };
    res.and_then(|_| w.flush()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Two comment lines (`# x_min x_max p_min p_max N hbar`, then those
/// values), then `N` rows of `N` values with 17 significant digits.
/// Complex fields are refused.
pub fn write_csv<W: Write>(field: &PhaseField, w: &mut W) -> std::io::Result<()> {
    if field.kind() != ValueKind::Real {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "CSV needs a real field; use the binary format"));
    }
    let g = field.grid();
    let n = g.n();
    writeln!(w, "# x_min x_max p_min p_max N hbar")?;
    writeln!(w, "# {:.16e} {:.16e} {:.16e} {:.16e} {} {:.16e}", g.x(0), g.x(n - 1), g.p(0), g.p(n - 1), n, g.hbar())?;
    let mut line = String::with_capacity(n * 24);
    for k in 0..n {
        line.clear();
        for (j, v) in field.row(k).iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.16e}", v.re));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// 16-bit binary PGM (big-endian samples) of `log10(|Q| + ε)`, stretched
/// linearly to `[0, 65535]`. A constant map is all black.
pub fn write_pgm<W: Write>(field: &PhaseField, w: &mut W) -> std::io::Result<()> {
    let n = field.n();
    let logs = log_amplitude(field);
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    write!(w, "P5\n{n} {n}\n65535\n")?;
    let mut buf = Vec::with_capacity(2 * logs.len());
    for v in &logs {
        let level = if span > 0.0 { ((v - lo) / span * 65535.0).round() as u16 } else { 0 };
        buf.extend_from_slice(&level.to_be_bytes());
    }
    w.write_all(&buf)
}

/// `TFQ1`, then little-endian `f64`s: `[N, x_max, hbar, kind]` (kind 0 =
/// real, 1 = complex), then `N²` values (`re` or `re, im` pairs).
pub fn write_binary<W: Write>(field: &PhaseField, w: &mut W) -> std::io::Result<()> {
    let g = field.grid();
    let complex = field.kind() == ValueKind::Complex;
    w.write_all(MAGIC)?;
    for v in [g.n() as f64, g.x_axis().x_max(), g.hbar(), if complex { 1.0 } else { 0.0 }] {
        w.write_all(&v.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(field.values().len() * if complex { 16 } else { 8 });
    for v in field.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        if complex {
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    w.write_all(&buf)
}

pub fn read_binary_from<R: Read>(r: &mut R, path: &Path) -> Result<PhaseField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|e| Error::io(path, e))?;
    if &magic != MAGIC {
        return Err(Error::format(path, "missing TFQ1 magic"));
    }
    let mut f64s = |count: usize| -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; 8 * count];
        r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    };
    let head = f64s(4)?;
    let n = head[0];
    if !(n >= 0.0 && n.fract() == 0.0 && n <= 1e6) {
        return Err(Error::format(path, format!("bad grid size {n}")));
    }
    let n = n as usize;
    let hbar = HBarConfig::new(head[2]).map_err(|e| Error::format(path, e.to_string()))?;
    let grid: PhaseGrid = make_spatial_grid(n, head[1], hbar).map_err(|e| Error::format(path, e.to_string()))?.into();
    let field = match head[3] {
        0.0 => PhaseField::from_real(grid, f64s(n * n)?)?,
        1.0 => {
            let raw = f64s(2 * n * n)?;
            PhaseField::new(grid, raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())?
        }
        k => return Err(Error::format(path, format!("bad value kind {k}"))),
    };
    let mut rest = [0u8; 1];
    match r.read(&mut rest) {
        Ok(0) => Ok(field),
        Ok(_) => Err(Error::format(path, "trailing bytes after field")),
        Err(e) => Err(Error::io(path, e)),
    }
}

pub fn read_binary(path: &Path) -> Result<PhaseField> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_binary_from(&mut BufReader::new(file), path)
}

/// One sample per line (`re` or `re,im`), `#` comments and blank lines
/// skipped; the count must match the grid.
pub fn read_samples(path: &Path, grid: &SpatialGrid) -> Result<Signal> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::with_capacity(grid.n_points());
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: std::result::Result<Vec<f64>, _> = body.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let v = match nums.as_deref() {
            Ok([re]) => Complex64::new(*re, 0.0),
            Ok([re, im]) => Complex64::new(*re, *im),
            _ => return Err(Error::format(path, format!("line {}: expected `re` or `re,im`", lineno + 1))),
        };
        values.push(v);
    }
    if values.len() != grid.n_points() {
        return Err(Error::format(path, format!("{} samples for a grid of {}", values.len(), grid.n_points())));
    }
    Ok(Signal::new(*grid, values)?)
}
