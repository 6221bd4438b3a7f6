use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rotation magnitude (radians) for which `tan θ ≈ θ` is assumed.
pub const SMALL_ANGLE_LIMIT: f64 = 0.01;

/// Optical parameters needed to map rotations to spectrum shifts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalConfig {
    /// Illumination wavelength in meters.
    pub wavelength: f64,
    /// Raster size N in pixels.
    pub grid_size: usize,
    /// Sample-plane pixel pitch in meters.
    pub pixel_pitch: f64,
    /// Pupil radius in frequency-domain pixels.
    pub aperture_radius: f64,
}

impl OpticalConfig {
    pub fn new(
        wavelength: f64,
        grid_size: usize,
        pixel_pitch: f64,
        aperture_radius: f64,
    ) -> Result<Self> {
        let cfg = Self {
            wavelength,
            grid_size,
            pixel_pitch,
            aperture_radius,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(Error::validation(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return Err(Error::validation(format!(
                "pixel pitch must be positive, got {}",
                self.pixel_pitch
            )));
        }
        if self.grid_size < 2 || !self.grid_size.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "grid size must be even and at least 2, got {}",
                self.grid_size
            )));
        }
        let half = self.grid_size as f64 / 2.0;
        if !(self.aperture_radius > 0.0 && self.aperture_radius < half) {
            return Err(Error::validation(format!(
                "aperture radius must lie in (0, {half}), got {}",
                self.aperture_radius
            )));
        }
        Ok(())
    }

    /// Frequency sampling pitch `1 / (N Δx)` in cycles per meter.
    pub fn frequency_pitch(&self) -> f64 {
        1.0 / (self.grid_size as f64 * self.pixel_pitch)
    }

    /// Largest per-axis integer shift that keeps the aperture on the grid.
    pub fn max_shift(&self) -> i64 {
        max_shift(self.grid_size, self.aperture_radius)
    }

    pub fn check_on_grid(&self, k: WaveVector) -> Result<()> {
        check_on_grid(k, self.max_shift())
    }
}

pub(crate) fn max_shift(n: usize, radius: f64) -> i64 {
    ((n as f64 / 2.0 - radius).floor() as i64).max(0)
}

pub(crate) fn check_on_grid(k: WaveVector, bound: i64) -> Result<()> {
    if k.kx.abs() > bound || k.ky.abs() > bound {
        return Err(Error::validation(format!(
            "wavevector ({}, {}) moves the aperture off the grid (|k| must be <= {bound})",
            k.kx, k.ky
        )));
    }
    Ok(())
}

/// Integer spectrum shift in frequency-domain pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WaveVector {
    pub kx: i64,
    pub ky: i64,
}

impl WaveVector {
    pub const ZERO: WaveVector = WaveVector { kx: 0, ky: 0 };

    pub const fn new(kx: i64, ky: i64) -> Self {
        Self { kx, ky }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Self::new(self.kx + dx, self.ky + dy)
    }

    pub fn norm_sqr(self) -> i64 {
        self.kx * self.kx + self.ky * self.ky
    }

    pub fn as_shift(self) -> PixelShift {
        PixelShift {
            kx: self.kx as f64,
            ky: self.ky as f64,
        }
    }
}

impl std::ops::Sub for WaveVector {
    type Output = WaveVector;
    fn sub(self, rhs: WaveVector) -> WaveVector {
        WaveVector::new(self.kx - rhs.kx, self.ky - rhs.ky)
    }
}

impl std::fmt::Display for WaveVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.kx, self.ky)
    }
}

/// Real-valued spectrum shift, before rounding to the pixel grid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PixelShift {
    pub kx: f64,
    pub ky: f64,
}

impl PixelShift {
    /// Rounds each component half away from zero.
    pub fn round(self) -> WaveVector {
        WaveVector::new(self.kx.round() as i64, self.ky.round() as i64)
    }

    pub fn norm(self) -> f64 {
        self.kx.hypot(self.ky)
    }
}

/// Small target rotation about the x and y axes, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RotationAngle {
    pub theta_x: f64,
    pub theta_y: f64,
}

impl RotationAngle {
    pub fn new(theta_x: f64, theta_y: f64) -> Result<Self> {
        let angle = Self { theta_x, theta_y };
        angle.validate()?;
        Ok(angle)
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, v) in [("x", self.theta_x), ("y", self.theta_y)] {
            if !v.is_finite() || v.abs() >= SMALL_ANGLE_LIMIT {
                return Err(Error::validation(format!(
                    "rotation about {axis} must satisfy |θ| < {SMALL_ANGLE_LIMIT} rad, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Spectrum shift in pixels produced by rotating a reflective target:
/// `(2θ/λ)·N·Δx` per axis. The factor 2 comes from the reflection doubling
/// the optical path difference.
pub fn rotation_to_pixel_shift(angle: RotationAngle, cfg: &OpticalConfig) -> PixelShift {
    let scale = 2.0 * cfg.grid_size as f64 * cfg.pixel_pitch / cfg.wavelength;
    PixelShift {
        kx: scale * angle.theta_x,
        ky: scale * angle.theta_y,
    }
}

/// Inverse of [`rotation_to_pixel_shift`]: `θ = λ·k / (2·N·Δx)`.
pub fn pixel_shift_to_rotation(shift: PixelShift, cfg: &OpticalConfig) -> RotationAngle {
    let scale = cfg.wavelength / (2.0 * cfg.grid_size as f64 * cfg.pixel_pitch);
    RotationAngle {
        theta_x: scale * shift.kx,
        theta_y: scale * shift.ky,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> OpticalConfig {
        OpticalConfig::new(532e-9, 256, 9.4e-6, 25.0).unwrap()
    }

    #[test]
    fn zero_rotation_zero_shift() {
        let s = rotation_to_pixel_shift(RotationAngle::default(), &lab());
        assert_eq!(s, PixelShift::default());
        let a = pixel_shift_to_rotation(PixelShift::default(), &lab());
        assert_eq!(a, RotationAngle::default());
    }

    #[test]
    fn lab_config_shift() {
        // 2 * 1e-3 * 256 * 9.4e-6 / 532e-9, evaluated at 30 digits with mpmath.
        let expected = 9.046_616_541_353_383;
        let s = rotation_to_pixel_shift(RotationAngle::new(1e-3, 0.0).unwrap(), &lab());
        assert!(((s.kx - expected) / expected).abs() < 1e-14);
        assert_eq!(s.ky, 0.0);
        let back = pixel_shift_to_rotation(PixelShift { kx: expected, ky: 0.0 }, &lab());
        assert!(((back.theta_x - 1e-3) / 1e-3).abs() < 1e-14);
    }

    #[test]
    fn inverse_is_linear() {
        let k = PixelShift { kx: 3.5, ky: -7.25 };
        let one = pixel_shift_to_rotation(k, &lab());
        let two = pixel_shift_to_rotation(PixelShift { kx: 2.0 * k.kx, ky: 2.0 * k.ky }, &lab());
        assert!((two.theta_x - 2.0 * one.theta_x).abs() <= 1e-18);
        assert!((two.theta_y - 2.0 * one.theta_y).abs() <= 1e-18);
    }

    #[test]
    fn config_validation() {
        assert!(OpticalConfig::new(532e-9, 256, 9.4e-6, 128.0).is_err());
        assert!(OpticalConfig::new(532e-9, 256, 9.4e-6, 0.0).is_err());
        assert!(OpticalConfig::new(-1.0, 256, 9.4e-6, 10.0).is_err());
        assert!(OpticalConfig::new(532e-9, 255, 9.4e-6, 10.0).is_err());
        assert!(OpticalConfig::new(532e-9, 256, 0.0, 10.0).is_err());
        let cfg = OpticalConfig::new(532e-9, 256, 9.4e-6, 16.0).unwrap();
        assert_eq!(cfg.max_shift(), 112);
        assert!((cfg.frequency_pitch() - 1.0 / (256.0 * 9.4e-6)).abs() < 1e-9);
    }

    #[test]
    fn angle_limit() {
        assert!(RotationAngle::new(0.0099, -0.0099).is_ok());
        assert!(RotationAngle::new(0.01, 0.0).is_err());
        assert!(RotationAngle::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(PixelShift { kx: 2.5, ky: -2.5 }.round(), WaveVector::new(3, -3));
        assert_eq!(PixelShift { kx: 0.49, ky: -0.51 }.round(), WaveVector::new(0, -1));
    }
}
