//! Named simulation configurations.

use crate::error::Result;
use crate::metrics::radius_for_overlap;
use crate::optics::{rotation_to_pixel_shift, OpticalConfig, RotationAngle};
use crate::sim::{generate_rotation_grid, AngleGrid};

pub const WAVELENGTH_532NM: f64 = 532e-9;

/// Space-scene setup: a 100 m wide target on a 256² grid at 532 nm, rotated
/// over an 11×11 grid of tilts up to ±9e-6 degrees. The aperture radius is
/// chosen so neighboring apertures overlap by 54%.
#[derive(Debug, Clone)]
pub struct SpaceScene {
    pub config: OpticalConfig,
    pub grid: AngleGrid,
    pub theta_max: f64,
    /// Nominal (unrounded) k-space distance between neighboring apertures.
    pub aperture_spacing: f64,
}

pub const SPACE_TARGET_WIDTH_M: f64 = 100.0;
pub const SPACE_GRID_SIZE: usize = 256;
pub const SPACE_GRID_STEPS: usize = 11;
pub const SPACE_THETA_MAX_DEG: f64 = 9e-6;
pub const SPACE_OVERLAP: f64 = 0.54;

impl SpaceScene {
    pub fn new() -> Result<Self> {
        let n = SPACE_GRID_SIZE;
        let pitch = SPACE_TARGET_WIDTH_M / n as f64;
        let theta_max = SPACE_THETA_MAX_DEG.to_radians();
        // The radius is irrelevant to the rotation mapping; use a placeholder.
        let probe = OpticalConfig::new(WAVELENGTH_532NM, n, pitch, 1.0)?;
        let step = 2.0 * theta_max / (SPACE_GRID_STEPS - 1) as f64;
        let spacing = rotation_to_pixel_shift(RotationAngle::new(step, 0.0)?, &probe).kx;
        let radius = radius_for_overlap(spacing, SPACE_OVERLAP)?;
        let config = OpticalConfig::new(WAVELENGTH_532NM, n, pitch, radius)?;
        let grid = generate_rotation_grid(SPACE_GRID_STEPS, SPACE_GRID_STEPS, theta_max)?;
        Ok(Self {
            config,
            grid,
            theta_max,
            aperture_spacing: spacing,
        })
    }
}

/// Lab bench numbers: 532 nm, 256² grid, 9.4 µm effective pixel pitch.
pub fn lab_config(aperture_radius: f64) -> Result<OpticalConfig> {
    OpticalConfig::new(WAVELENGTH_532NM, 256, 9.4e-6, aperture_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::overlap_fraction;

    #[test]
    fn space_scene_geometry() {
        let s = SpaceScene::new().unwrap();
        // mpmath: 2·θ·N·Δx/λ with θ = 9e-6° gives 59.0525 px at the edge, 11.8105 px per step.
        assert!((s.aperture_spacing - 11.810_498_697_705_99).abs() < 1e-9);
        assert!((s.config.aperture_radius - 15.964_416_712_231_357).abs() < 1e-9);
        assert!((overlap_fraction(s.aperture_spacing, s.config.aperture_radius) - 0.54).abs() < 1e-12);
        assert_eq!(s.grid.len(), 121);
        let edge = rotation_to_pixel_shift(s.grid.angles[120], &s.config);
        assert!((edge.kx - 59.052_493_488_529_95).abs() < 1e-9);
    }
}
