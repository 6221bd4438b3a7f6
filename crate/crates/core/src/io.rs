//! Raw raster files and atomic directory output.
//!
//! A raw raster is `N·N` little-endian IEEE-754 `f32` values in row-major
//! order with no header.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn write_f32_raster(path: &Path, raster: &Array2<f32>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for v in raster.iter() {
        w.write_all(&v.to_le_bytes()).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_f32_raster(path: &Path, n: usize) -> Result<Array2<f32>> {
    let mut bytes = Vec::with_capacity(n * n * 4);
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() != n * n * 4 {
        return Err(Error::format(
            path,
            format!("expected {} bytes for a {n}×{n} raster, found {}", n * n * 4, bytes.len()),
        ));
    }
    let values = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    Array2::from_shape_vec((n, n), values).map_err(|e| Error::format(path, e.to_string()))
}

/// Infers N from a raw raster's byte length.
pub fn raster_side_from_len(path: &Path) -> Result<usize> {
    let len = fs::metadata(path).map_err(|e| Error::io(path, e))?.len() as usize;
    let values = len / 4;
    let n = (values as f64).sqrt().round() as usize;
    if !len.is_multiple_of(4) || n * n != values {
        return Err(Error::format(path, format!("{len} bytes is not a square f32 raster")));
    }
    Ok(n)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::format(path, e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))
}

/// Populates `dest` through a sibling temporary directory that is renamed into
/// place only after `fill` succeeds. An existing `dest` is replaced.
pub fn write_dir_atomically<F>(dest: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    let parent = match dest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let name = dest
        .file_name()
        .ok_or_else(|| Error::validation(format!("invalid output directory {}", dest.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = parent.join(format!(".{name}.tmp-{}", std::process::id()));
    if tmp.exists() {
        fs::remove_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
    }
    fs::create_dir(&tmp).map_err(|e| Error::io(&tmp, e))?;
    if let Err(e) = fill(&tmp) {
        let _ = fs::remove_dir_all(&tmp);
        return Err(e);
    }
    if dest.exists() {
        fs::remove_dir_all(dest).map_err(|e| Error::io(dest, e))?;
    }
    fs::rename(&tmp, dest).map_err(|e| Error::io(dest, e))
}
