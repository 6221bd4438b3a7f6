//! Dataset directory format.
//!
//! ```text
//! <dir>/manifest.json        config, noise, layout, record list
//! <dir>/image_0000.f32       image-plane intensity of record 0
//! <dir>/pupil_0000.f32       pupil-plane intensity of record 0
//! ...
//! <dir>/truth_amplitude.f32  optional ground-truth object
//! <dir>/truth_phase.f32
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::{MeasurementSet, Record};
use super::grid::GridLayout;
use super::noise::NoiseConfig;
use crate::error::{Error, Result};
use crate::io::{read_f32_raster, read_json, write_dir_atomically, write_f32_raster, write_json};
use crate::optics::{ComplexField, Domain, OpticalConfig, RotationAngle, WaveVector};
use crate::raster::{to_f32, to_f64};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TRUTH_AMPLITUDE_FILE: &str = "truth_amplitude.f32";
pub const TRUTH_PHASE_FILE: &str = "truth_phase.f32";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub config: OpticalConfig,
    pub noise: NoiseConfig,
    pub layout: GridLayout,
    pub records: Vec<ManifestRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub index: usize,
    pub angle: RotationAngle,
    pub true_k: Option<WaveVector>,
    pub image_file: String,
    pub pupil_file: String,
}

/// Writes `ms` into `dir`, replacing it atomically.
pub fn save_dataset(ms: &MeasurementSet, dir: &Path) -> Result<()> {
    ms.validate()?;
    write_dir_atomically(dir, |tmp| write_dataset_files(ms, tmp))
}

/// Writes the dataset files into an existing directory.
pub fn write_dataset_files(ms: &MeasurementSet, dir: &Path) -> Result<()> {
    let mut records = Vec::with_capacity(ms.len());
    for rec in &ms.records {
        let image_file = format!("image_{:04}.f32", rec.index);
        let pupil_file = format!("pupil_{:04}.f32", rec.index);
        write_f32_raster(&dir.join(&image_file), &rec.image_intensity)?;
        write_f32_raster(&dir.join(&pupil_file), &rec.pupil_intensity)?;
        records.push(ManifestRecord {
            index: rec.index,
            angle: rec.angle,
            true_k: rec.true_k,
            image_file,
            pupil_file,
        });
    }
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        config: ms.config,
        noise: ms.noise,
        layout: ms.layout,
        records,
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)
}

/// Writes the ground-truth object next to a dataset.
pub fn write_truth_files(target: &ComplexField, dir: &Path) -> Result<()> {
    target.expect_domain(Domain::Spatial, "ground-truth object")?;
    write_f32_raster(&dir.join(TRUTH_AMPLITUDE_FILE), &to_f32(&target.amplitude()))?;
    write_f32_raster(&dir.join(TRUTH_PHASE_FILE), &to_f32(&target.phase()))
}

/// Ground-truth object stored with a dataset, if any.
pub fn load_truth(dir: &Path, grid_size: usize) -> Result<Option<ComplexField>> {
    let (amp_path, phase_path) = (dir.join(TRUTH_AMPLITUDE_FILE), dir.join(TRUTH_PHASE_FILE));
    if !amp_path.exists() && !phase_path.exists() {
        return Ok(None);
    }
    let amp = to_f64(&read_f32_raster(&amp_path, grid_size)?);
    let phase = to_f64(&read_f32_raster(&phase_path, grid_size)?);
    ComplexField::from_polar(&amp, &phase, Domain::Spatial).map(Some)
}

pub fn load_dataset(dir: &Path) -> Result<MeasurementSet> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest: Manifest = read_json(&manifest_path)?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::format(
            &manifest_path,
            format!("unsupported format version {}", manifest.format_version),
        ));
    }
    manifest.config.validate()?;
    let n = manifest.config.grid_size;
    let records = manifest
        .records
        .iter()
        .map(|r| {
            Ok(Record {
                index: r.index,
                angle: r.angle,
                true_k: r.true_k,
                image_intensity: read_f32_raster(&dir.join(&r.image_file), n)?,
                pupil_intensity: read_f32_raster(&dir.join(&r.pupil_file), n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ms = MeasurementSet {
        config: manifest.config,
        noise: manifest.noise,
        layout: manifest.layout,
        records,
    };
    ms.validate()?;
    Ok(ms)
}
