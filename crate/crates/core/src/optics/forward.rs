//! Dual-plane forward model.
//!
//! Image plane: `I_k(s) = |F⁻¹{ O(u + k) M(u) }|²`, the spectrum translated by
//! `-k` through a fixed pupil. Pupil plane: `P_k(u) = |O(u) M(u - k)|²`, the
//! pupil translated by `+k` over a static spectrum. Both observe the same
//! spectral region (the disk at `center + k`), so image intensities agree
//! between the two conventions while the pupil intensity keeps its absolute
//! position.

use ndarray::Array2;
use num_complex::Complex64;

use super::fft::CenteredFft;
use super::field::{ComplexField, Domain};
use super::geometry::WaveVector;
use super::mask::PupilMask;
use crate::error::Result;
use crate::raster::{check_same_shape, RealRaster};

/// Circularly translates a raster by `+k`: `out(u) = in(u - k)`.
pub fn translate<T: Copy>(data: &Array2<T>, k: WaveVector) -> Array2<T> {
    let n = data.nrows() as i64;
    Array2::from_shape_fn(data.dim(), |(r, c)| {
        let sr = (r as i64 - k.ky).rem_euclid(n) as usize;
        let sc = (c as i64 - k.kx).rem_euclid(n) as usize;
        data[[sr, sc]]
    })
}

/// `O(u + k)·M(u)` as a full raster: the aperture at `center + k` moved to the center.
pub fn extract_aperture(
    spectrum: &Array2<Complex64>,
    mask: &PupilMask,
    k: WaveVector,
) -> Array2<Complex64> {
    let n = spectrum.nrows() as i64;
    let c = n / 2;
    let mut out = Array2::zeros(spectrum.dim());
    for &(dy, dx) in mask.support() {
        let src_r = (c + dy + k.ky).rem_euclid(n) as usize;
        let src_c = (c + dx + k.kx).rem_euclid(n) as usize;
        out[[(c + dy) as usize, (c + dx) as usize]] = spectrum[[src_r, src_c]];
    }
    out
}

fn check_inputs(spectrum: &ComplexField, mask: &PupilMask, k: WaveVector) -> Result<()> {
    spectrum.expect_domain(Domain::Frequency, "spectrum")?;
    check_same_shape(spectrum.data().dim(), mask.raster().dim())?;
    mask.check_on_grid(k)
}

/// Image-plane intensity `|F⁻¹{O(u + k) M(u)}|²`.
pub fn simulate_image_intensity(
    spectrum: &ComplexField,
    mask: &PupilMask,
    k: WaveVector,
) -> Result<RealRaster> {
    check_inputs(spectrum, mask, k)?;
    let mut field = extract_aperture(spectrum.data(), mask, k);
    CenteredFft::shared(spectrum.size()).inverse_in_place(&mut field);
    Ok(field.mapv(|v| v.norm_sqr()))
}

/// Pupil-plane intensity `|O(u) M(u - k)|²`.
pub fn simulate_pupil_intensity(
    spectrum: &ComplexField,
    mask: &PupilMask,
    k: WaveVector,
) -> Result<RealRaster> {
    check_inputs(spectrum, mask, k)?;
    let n = spectrum.size() as i64;
    let c = n / 2;
    let mut out = RealRaster::zeros(spectrum.data().dim());
    for &(dy, dx) in mask.support() {
        let r = (c + dy + k.ky).rem_euclid(n) as usize;
        let col = (c + dx + k.kx).rem_euclid(n) as usize;
        out[[r, col]] = spectrum.data()[[r, col]].norm_sqr();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{fft_centered, make_circular_mask};

    #[test]
    fn constant_object_gives_unit_intensity() {
        let n = 32;
        let obj = ComplexField::from_real(&RealRaster::ones((n, n)), Domain::Spatial).unwrap();
        let spec = fft_centered(&obj).unwrap();
        let mask = make_circular_mask(4.0, n).unwrap();
        let img = simulate_image_intensity(&spec, &mask, WaveVector::ZERO).unwrap();
        for v in img.iter() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_spectrum_gives_zero_rasters() {
        let n = 16;
        let spec = ComplexField::zeros(n, Domain::Frequency).unwrap();
        let mask = make_circular_mask(3.0, n).unwrap();
        let k = WaveVector::new(2, -1);
        assert!(simulate_image_intensity(&spec, &mask, k).unwrap().iter().all(|&v| v == 0.0));
        assert!(simulate_pupil_intensity(&spec, &mask, k).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn flat_spectrum_exposes_shifted_disk() {
        let n = 64;
        let spec = ComplexField::new(Array2::from_elem((n, n), Complex64::new(1.0, 0.0)), Domain::Frequency)
            .unwrap();
        let mask = make_circular_mask(6.0, n).unwrap();
        let p = simulate_pupil_intensity(&spec, &mask, WaveVector::new(10, 0)).unwrap();
        assert_eq!(p, mask.shifted(WaveVector::new(10, 0)));
        assert_eq!(p[[32, 42]], 1.0);
    }

    #[test]
    fn off_grid_wavevector_is_rejected() {
        let n = 32;
        let spec = ComplexField::zeros(n, Domain::Frequency).unwrap();
        let mask = make_circular_mask(10.0, n).unwrap();
        assert!(simulate_image_intensity(&spec, &mask, WaveVector::new(7, 0)).is_err());
        assert!(simulate_pupil_intensity(&spec, &mask, WaveVector::new(0, -7)).is_err());
        assert!(simulate_image_intensity(&spec, &mask, WaveVector::new(6, -6)).is_ok());
    }

    #[test]
    fn spatial_input_is_rejected() {
        let n = 8;
        let f = ComplexField::zeros(n, Domain::Spatial).unwrap();
        let mask = make_circular_mask(2.0, n).unwrap();
        assert!(simulate_image_intensity(&f, &mask, WaveVector::ZERO).is_err());
    }
}
