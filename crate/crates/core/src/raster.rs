//! Real-valued rasters and small helpers shared across modules.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Real-valued N×N raster (intensities, masks, step sizes).
pub type RealRaster = Array2<f64>;

pub(crate) fn check_same_shape(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
    if expected != actual {
        return Err(Error::ShapeMismatch { expected, actual });
    }
    Ok(())
}

pub(crate) fn check_finite_nonnegative(raster: &RealRaster, what: &str) -> Result<()> {
    for &v in raster.iter() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::validation(format!(
                "{what} must be finite and nonnegative, found {v}"
            )));
        }
    }
    Ok(())
}

/// Widens an `f32` raster (the storage precision) to `f64`.
pub fn to_f64(raster: &Array2<f32>) -> RealRaster {
    raster.mapv(f64::from)
}

/// Narrows a raster to the `f32` storage precision.
pub fn to_f32(raster: &RealRaster) -> Array2<f32> {
    raster.mapv(|v| v as f32)
}

pub fn sum_of_squares(raster: &RealRaster) -> f64 {
    raster.iter().map(|v| v * v).sum()
}
