use ndarray::Array2;
use rayon::prelude::*;

use super::grid::{AngleGrid, GridLayout};
use super::noise::{add_noise, NoiseConfig};
use crate::error::{Error, Result};
use crate::kspace::{KSpaceEstimate, Provenance};
use crate::optics::{
    fft_centered, make_circular_mask, rotation_to_pixel_shift, simulate_image_intensity,
    simulate_pupil_intensity, ComplexField, Domain, OpticalConfig, PupilMask, RotationAngle,
    WaveVector,
};
use crate::raster::to_f32;

/// One rotation state with its image- and pupil-plane intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub index: usize,
    pub angle: RotationAngle,
    /// Ground-truth shift; present only for synthetic data.
    pub true_k: Option<WaveVector>,
    pub image_intensity: Array2<f32>,
    pub pupil_intensity: Array2<f32>,
}

/// Ordered dual-plane measurements sharing one optical configuration.
///
/// Rasters are stored at `f32`, the precision of the on-disk format.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub config: OpticalConfig,
    pub noise: NoiseConfig,
    pub layout: GridLayout,
    pub records: Vec<Record>,
}

impl MeasurementSet {
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let n = self.config.grid_size;
        let synthetic = self.records.first().map(|r| r.true_k.is_some());
        for (i, rec) in self.records.iter().enumerate() {
            if rec.index != i {
                return Err(Error::validation(format!(
                    "record at position {i} carries index {}",
                    rec.index
                )));
            }
            for (what, raster) in [("image", &rec.image_intensity), ("pupil", &rec.pupil_intensity)] {
                if raster.dim() != (n, n) {
                    return Err(Error::ShapeMismatch {
                        expected: (n, n),
                        actual: raster.dim(),
                    });
                }
                if raster.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::validation(format!(
                        "record {i} {what} intensity has negative or non-finite values"
                    )));
                }
            }
            if Some(rec.true_k.is_some()) != synthetic {
                return Err(Error::validation(
                    "true_k must be present on every record or on none",
                ));
            }
            if let Some(k) = rec.true_k {
                self.config.check_on_grid(k)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn grid_size(&self) -> usize {
        self.config.grid_size
    }

    pub fn is_synthetic(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.true_k.is_some())
    }

    pub fn mask(&self) -> Result<PupilMask> {
        make_circular_mask(self.config.aperture_radius, self.config.grid_size)
    }

    /// Ground-truth shifts, if this set was synthesized.
    pub fn true_k(&self) -> Option<KSpaceEstimate> {
        let shifts = self.records.iter().map(|r| r.true_k).collect::<Option<Vec<_>>>()?;
        if shifts.is_empty() {
            return None;
        }
        Some(KSpaceEstimate::new(shifts, Provenance::GroundTruth))
    }

    /// Drops ground truth, emulating an uncalibrated acquisition.
    pub fn without_ground_truth(mut self) -> Self {
        for r in &mut self.records {
            r.true_k = None;
        }
        self
    }
}

/// Synthesizes one record per grid angle.
///
/// Each shift is `rotation_to_pixel_shift` rounded half away from zero. Noise
/// is drawn after clean synthesis, independently for both planes, from a
/// stream derived from the seed and record index, so the result does not
/// depend on thread scheduling.
pub fn synthesize_dataset(
    target: &ComplexField,
    grid: &AngleGrid,
    cfg: &OpticalConfig,
    noise: &NoiseConfig,
) -> Result<MeasurementSet> {
    cfg.validate()?;
    noise.spec.validate()?;
    target.expect_domain(Domain::Spatial, "target")?;
    if target.size() != cfg.grid_size {
        return Err(Error::validation(format!(
            "target is {0}×{0} but the configuration expects {1}×{1}",
            target.size(),
            cfg.grid_size
        )));
    }
    let shifts = grid
        .angles
        .iter()
        .map(|angle| {
            angle.validate()?;
            let k = rotation_to_pixel_shift(*angle, cfg).round();
            cfg.check_on_grid(k).map_err(|_| {
                Error::validation(format!(
                    "rotation (θx={}, θy={}) maps to k={k}, beyond the on-grid bound {}",
                    angle.theta_x,
                    angle.theta_y,
                    cfg.max_shift()
                ))
            })?;
            Ok(k)
        })
        .collect::<Result<Vec<_>>>()?;

    let spectrum = fft_centered(target)?;
    let mask = make_circular_mask(cfg.aperture_radius, cfg.grid_size)?;
    let records = grid
        .angles
        .par_iter()
        .zip(shifts.par_iter())
        .enumerate()
        .map(|(index, (angle, &k))| {
            let image = simulate_image_intensity(&spectrum, &mask, k)?;
            let pupil = simulate_pupil_intensity(&spectrum, &mask, k)?;
            let image = add_noise(&image, &noise.spec, &mut noise.rng_for(index, 0))?;
            let pupil = add_noise(&pupil, &noise.spec, &mut noise.rng_for(index, 1))?;
            Ok(Record {
                index,
                angle: *angle,
                true_k: Some(k),
                image_intensity: to_f32(&image),
                pupil_intensity: to_f32(&pupil),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MeasurementSet {
        config: *cfg,
        noise: *noise,
        layout: grid.layout,
        records,
    })
}
