pub mod evaluate;
pub mod plot;
pub mod reconstruct;
pub mod simulate;

use std::path::Path;

use isafp::sim::io::load_dataset;
use isafp::sim::{AngleGrid, MeasurementSet};
use isafp::optics::rotation_to_pixel_shift;
use isafp::RotationAngle;

use crate::error::{CliError, CliResult};

pub(crate) fn open_dataset(dir: &Path) -> CliResult<MeasurementSet> {
    if !dir.is_dir() {
        return Err(CliError::Io(format!("dataset directory {} not found", dir.display())));
    }
    Ok(load_dataset(dir)?)
}

/// Nominal distance in pixels between neighboring apertures, from the record angles.
pub(crate) fn aperture_spacing(ms: &MeasurementSet) -> Option<f64> {
    let angles = ms.records.iter().map(|r| r.angle).collect();
    let step = AngleGrid::custom(angles).ok()?.spacing()?;
    let probe = RotationAngle { theta_x: step, theta_y: 0.0 };
    Some(rotation_to_pixel_shift(probe, &ms.config).kx)
}

/// Writes `bytes` to `path` through a sibling temporary file.
pub(crate) fn write_file_atomically(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::validation(format!("invalid output path {}", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let io = |e: std::io::Error, p: &Path| CliError::Io(format!("cannot write {}: {e}", p.display()));
    std::fs::write(&tmp, bytes).map_err(|e| io(e, &tmp))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e, path)
    })
}
