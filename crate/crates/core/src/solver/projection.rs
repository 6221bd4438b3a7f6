use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kspace::KSpaceEstimate;
use crate::optics::{extract_aperture, CenteredFft, ComplexField, Domain, PupilMask, WaveVector};
use crate::raster::{check_finite_nonnegative, check_same_shape, to_f64, RealRaster};
use crate::sim::MeasurementSet;

/// Record whose shift estimate lies closest to zero (lowest index on ties).
pub fn default_init_record(k: &KSpaceEstimate) -> Option<usize> {
    k.shifts
        .iter()
        .enumerate()
        .min_by_key(|(i, s)| (s.norm_sqr(), *i))
        .map(|(i, _)| i)
}

/// Spectrum of the square-root amplitude of one recorded image.
pub fn initialize_object(ms: &MeasurementSet, index: usize) -> Result<ComplexField> {
    let rec = ms.records.get(index).ok_or_else(|| {
        Error::validation(format!(
            "initial record {index} out of range for {} records",
            ms.len()
        ))
    })?;
    let mut data = rec
        .image_intensity
        .mapv(|v| Complex64::new(f64::from(v).max(0.0).sqrt(), 0.0));
    CenteredFft::shared(ms.grid_size()).forward_in_place(&mut data);
    ComplexField::new(data, Domain::Frequency)
}

/// Image-plane field `F⁻¹{O(u + k) M(u)}`.
pub fn image_projection(
    spectrum: &ComplexField,
    mask: &PupilMask,
    k: WaveVector,
) -> Result<ComplexField> {
    spectrum.expect_domain(Domain::Frequency, "spectrum")?;
    check_same_shape(spectrum.data().dim(), mask.raster().dim())?;
    mask.check_on_grid(k)?;
    let mut field = extract_aperture(spectrum.data(), mask, k);
    CenteredFft::shared(spectrum.size()).inverse_in_place(&mut field);
    Ok(ComplexField::from_parts(field, Domain::Spatial))
}

/// Replaces each modulus by `sqrt(target)`, keeping the phase where the
/// squared modulus exceeds `eps` and using zero phase elsewhere.
pub(crate) fn replace_modulus(field: &mut Array2<Complex64>, target: &RealRaster, eps: f64) {
    for (v, &t) in field.iter_mut().zip(target.iter()) {
        *v = modulus_replaced(*v, t, eps);
    }
}

#[inline]
pub(crate) fn modulus_replaced(v: Complex64, target: f64, eps: f64) -> Complex64 {
    let amp = target.max(0.0).sqrt();
    let n2 = v.norm_sqr();
    if n2 > eps {
        v * (amp / n2.sqrt())
    } else {
        Complex64::new(amp, 0.0)
    }
}

fn constrain(
    field: &ComplexField,
    intensity: &RealRaster,
    eps: f64,
    domain: Domain,
    what: &str,
) -> Result<ComplexField> {
    field.expect_domain(domain, what)?;
    check_same_shape(field.data().dim(), intensity.dim())?;
    check_finite_nonnegative(intensity, "intensity")?;
    let mut out = field.data().clone();
    replace_modulus(&mut out, intensity, eps);
    Ok(ComplexField::from_parts(out, domain))
}

/// Enforces a measured image-plane intensity on a spatial field.
pub fn apply_image_constraint(
    psi: &ComplexField,
    intensity: &RealRaster,
    eps: f64,
) -> Result<ComplexField> {
    constrain(psi, intensity, eps, Domain::Spatial, "image field")
}

/// Enforces a measured pupil-plane intensity on a frequency-domain field.
pub fn apply_pupil_constraint(
    spectrum: &ComplexField,
    intensity: &RealRaster,
    eps: f64,
) -> Result<ComplexField> {
    constrain(spectrum, intensity, eps, Domain::Frequency, "pupil field")
}

/// Pupil intensity of a record moved into the aperture-centered frame used by
/// the image-plane projection, sampled on the mask support only.
pub(crate) fn local_pupil_values(
    pupil: &Array2<f32>,
    mask: &PupilMask,
    k: WaveVector,
) -> Vec<f64> {
    let n = pupil.nrows() as i64;
    let c = n / 2;
    mask.support()
        .iter()
        .map(|&(dy, dx)| {
            let r = (c + dy + k.ky).rem_euclid(n) as usize;
            let col = (c + dx + k.kx).rem_euclid(n) as usize;
            f64::from(pupil[[r, col]])
        })
        .collect()
}

pub(crate) fn image_f64(ms: &MeasurementSet) -> Vec<RealRaster> {
    ms.records.iter().map(|r| to_f64(&r.image_intensity)).collect()
}
