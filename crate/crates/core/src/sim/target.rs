use std::f64::consts::FRAC_PI_4;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::optics::{ComplexField, Domain};
use crate::raster::{check_same_shape, RealRaster};

/// Grayscale sources for a complex target `a(s)·exp(iφ(s))`.
///
/// Sources hold gray levels in `[0, 1]` (0 = black, 1 = white). The amplitude
/// is the gray level itself and the phase is `gray · phase_max`.
#[derive(Debug, Clone)]
pub struct TargetSpec {
    pub amplitude_source: RealRaster,
    pub phase_source: RealRaster,
    pub phase_max: f64,
}

impl TargetSpec {
    /// Uses one image for both amplitude and phase, with phase in `[0, π/4]`.
    pub fn from_intensity(image: RealRaster) -> Self {
        Self {
            amplitude_source: image.clone(),
            phase_source: image,
            phase_max: FRAC_PI_4,
        }
    }
}

fn check_source(raster: &RealRaster, what: &str) -> Result<()> {
    if raster.is_empty() {
        return Err(Error::validation(format!("{what} raster is empty")));
    }
    if let Some(v) = raster.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
        return Err(Error::validation(format!(
            "{what} gray levels must lie in [0, 1], found {v}"
        )));
    }
    Ok(())
}

/// Resamples both sources to `grid_size²` (bilinear) and forms the spatial field.
pub fn build_complex_target(spec: &TargetSpec, grid_size: usize) -> Result<ComplexField> {
    check_source(&spec.amplitude_source, "amplitude")?;
    check_source(&spec.phase_source, "phase")?;
    if !(spec.phase_max.is_finite() && spec.phase_max >= 0.0) {
        return Err(Error::validation(format!(
            "phase_max must be finite and nonnegative, got {}",
            spec.phase_max
        )));
    }
    let amp = resize_bilinear(&spec.amplitude_source, grid_size)?.mapv(|v| v.clamp(0.0, 1.0));
    let phase = resize_bilinear(&spec.phase_source, grid_size)?
        .mapv(|v| v.clamp(0.0, 1.0) * spec.phase_max);
    check_same_shape(amp.dim(), phase.dim())?;
    ComplexField::from_polar(&amp, &phase, Domain::Spatial)
}

/// Bilinear resampling onto a square `size×size` grid using pixel-center alignment.
pub fn resize_bilinear(src: &RealRaster, size: usize) -> Result<RealRaster> {
    let (h, w) = src.dim();
    if h == 0 || w == 0 || size == 0 {
        return Err(Error::validation("cannot resample an empty raster"));
    }
    if (h, w) == (size, size) {
        return Ok(src.clone());
    }
    let axis = |len: usize| -> Vec<(usize, usize, f64)> {
        let scale = len as f64 / size as f64;
        (0..size)
            .map(|i| {
                let pos = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (len - 1) as f64);
                let lo = pos.floor() as usize;
                let hi = (lo + 1).min(len - 1);
                (lo, hi, pos - lo as f64)
            })
            .collect()
    };
    let rows = axis(h);
    let cols = axis(w);
    Ok(Array2::from_shape_fn((size, size), |(r, c)| {
        let (r0, r1, fr) = rows[r];
        let (c0, c1, fc) = cols[c];
        let top = src[[r0, c0]] * (1.0 - fc) + src[[r0, c1]] * fc;
        let bottom = src[[r1, c0]] * (1.0 - fc) + src[[r1, c1]] * fc;
        top * (1.0 - fr) + bottom * fr
    }))
}
