//! Update directions for the three objective terms.
//!
//! Gradients of real objectives over complex unknowns use the convention
//! `∂L/∂Re + i ∂L/∂Im`, so `x - τ g` is steepest descent. Because the centered
//! transform is unitary, a spatial gradient maps to the spectrum by a plain
//! forward transform.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::{CenteredFft, ComplexField, Domain, PupilMask, WaveVector};
use crate::raster::check_same_shape;

/// A constrained pupil-plane field in the aperture-centered frame, paired
/// with the shift that places it in the global spectrum.
#[derive(Debug, Clone)]
pub struct PupilRecord {
    pub psi: ComplexField,
    pub k: WaveVector,
}

/// Running sums of `M·(Ô - Ψ)` and `M²` over all apertures.
#[derive(Debug, Clone)]
pub struct DataTermAccumulator {
    numerator: Array2<Complex64>,
    weight: Array2<f64>,
}

impl DataTermAccumulator {
    pub fn new(n: usize) -> Self {
        Self {
            numerator: Array2::zeros((n, n)),
            weight: Array2::zeros((n, n)),
        }
    }

    /// Adds one aperture given its constrained values on the mask support, in
    /// the order of [`PupilMask::support`].
    pub fn add_support_values(
        &mut self,
        spectrum: &Array2<Complex64>,
        mask: &PupilMask,
        k: WaveVector,
        values: &[Complex64],
    ) {
        debug_assert_eq!(values.len(), mask.support_count());
        let n = spectrum.nrows() as i64;
        let c = n / 2;
        let m = mask.raster();
        for (&(dy, dx), &psi) in mask.support().iter().zip(values) {
            let w = m[[(c + dy) as usize, (c + dx) as usize]];
            let g = [
                (c + dy + k.ky).rem_euclid(n) as usize,
                (c + dx + k.kx).rem_euclid(n) as usize,
            ];
            self.numerator[g] += (spectrum[g] - psi) * w;
            self.weight[g] += w * w;
        }
    }

    pub fn finish(self, eps: f64) -> Array2<Complex64> {
        let mut out = self.numerator;
        out.zip_mut_with(&self.weight, |v, &w| *v /= w + eps);
        out
    }
}

/// Data-term correction `Σ M(Ô - Ψ_j) / (Σ |M|² + ε)` at global positions.
pub fn data_update(
    spectrum: &ComplexField,
    records: &[PupilRecord],
    mask: &PupilMask,
    eps: f64,
) -> Result<ComplexField> {
    spectrum.expect_domain(Domain::Frequency, "spectrum")?;
    check_same_shape(spectrum.data().dim(), mask.raster().dim())?;
    if records.is_empty() {
        return Err(Error::validation("data update needs at least one record"));
    }
    let n = spectrum.size() as i64;
    let c = n / 2;
    let mut acc = DataTermAccumulator::new(spectrum.size());
    for rec in records {
        rec.psi.expect_domain(Domain::Frequency, "pupil field")?;
        check_same_shape(spectrum.data().dim(), rec.psi.data().dim())?;
        mask.check_on_grid(rec.k)?;
        let values: Vec<Complex64> = mask
            .support()
            .iter()
            .map(|&(dy, dx)| rec.psi.data()[[(c + dy) as usize, (c + dx) as usize]])
            .collect();
        acc.add_support_values(spectrum.data(), mask, rec.k, &values);
    }
    Ok(ComplexField::from_parts(acc.finish(eps), Domain::Frequency))
}

/// Periodic forward differences along columns (x) and rows (y).
fn forward_differences(o: &Array2<Complex64>) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = o.nrows();
    let gx = Array2::from_shape_fn(o.dim(), |(r, c)| o[[r, (c + 1) % n]] - o[[r, c]]);
    let gy = Array2::from_shape_fn(o.dim(), |(r, c)| o[[(r + 1) % n, c]] - o[[r, c]]);
    (gx, gy)
}

fn spatial(spectrum: &ComplexField) -> Result<Array2<Complex64>> {
    spectrum.expect_domain(Domain::Frequency, "spectrum")?;
    Ok(CenteredFft::shared(spectrum.size()).inverse(spectrum.data()))
}

pub(crate) fn tv_loss_spatial(o: &Array2<Complex64>, eps: f64) -> f64 {
    let (gx, gy) = forward_differences(o);
    gx.iter()
        .zip(gy.iter())
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() + eps * eps).sqrt())
        .sum()
}

pub(crate) fn phase_loss_spatial(o: &Array2<Complex64>) -> f64 {
    o.iter().map(|v| v.arg().powi(2)).sum()
}

/// Smoothed isotropic total variation `Σ sqrt(|∇o|² + ε²)` of the object.
pub fn tv_loss(spectrum: &ComplexField, eps: f64) -> Result<f64> {
    Ok(tv_loss_spatial(&spatial(spectrum)?, eps))
}

/// Phase sparsity `Σ arg(o)²` of the object.
pub fn phase_loss(spectrum: &ComplexField) -> Result<f64> {
    Ok(phase_loss_spatial(&spatial(spectrum)?))
}

pub(crate) fn tv_gradient_spatial(o: &Array2<Complex64>, eps: f64) -> Array2<Complex64> {
    let n = o.nrows();
    let (mut px, mut py) = forward_differences(o);
    for (a, b) in px.iter_mut().zip(py.iter_mut()) {
        let mag = (a.norm_sqr() + b.norm_sqr() + eps * eps).sqrt();
        *a /= mag;
        *b /= mag;
    }
    Array2::from_shape_fn(o.dim(), |(r, c)| {
        (px[[r, (c + n - 1) % n]] - px[[r, c]]) + (py[[(r + n - 1) % n, c]] - py[[r, c]])
    })
}

pub(crate) fn phase_gradient_spatial(o: &Array2<Complex64>, eps: f64) -> Array2<Complex64> {
    o.mapv(|v| {
        let phi = v.arg();
        Complex64::i() * v * (4.0 * phi / (2.0 * v.norm_sqr() + eps))
    })
}

/// Gradient of [`tv_loss`] with respect to the spectrum.
pub fn tv_gradient(spectrum: &ComplexField, eps: f64) -> Result<ComplexField> {
    let plan = CenteredFft::shared(spectrum.size());
    let mut g = tv_gradient_spatial(&spatial(spectrum)?, eps);
    plan.forward_in_place(&mut g);
    Ok(ComplexField::from_parts(g, Domain::Frequency))
}

/// Gradient of [`phase_loss`] with respect to the spectrum.
///
/// `ε` regularizes the `1/|o|` singularity; at `ε = 0` this is exact away
/// from zeros and the branch cut.
pub fn phase_gradient(spectrum: &ComplexField, eps: f64) -> Result<ComplexField> {
    let plan = CenteredFft::shared(spectrum.size());
    let mut g = phase_gradient_spatial(&spatial(spectrum)?, eps);
    plan.forward_in_place(&mut g);
    Ok(ComplexField::from_parts(g, Domain::Frequency))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{extract_aperture, make_circular_mask};

    fn field(n: usize, seed: f64) -> ComplexField {
        let data = Array2::from_shape_fn((n, n), |(r, c)| {
            let t = seed + r as f64 * 1.3 + c as f64 * 0.7;
            Complex64::new(t.sin() + 0.1 * t.cos(), (1.7 * t).cos())
        });
        ComplexField::new(data, Domain::Frequency).unwrap()
    }

    #[test]
    fn perfect_fit_gives_zero_update() {
        let s = field(16, 0.2);
        let mask = make_circular_mask(3.0, 16).unwrap();
        let records: Vec<_> = [WaveVector::new(0, 0), WaveVector::new(2, -1)]
            .into_iter()
            .map(|k| PupilRecord {
                psi: ComplexField::new(extract_aperture(s.data(), &mask, k), Domain::Frequency)
                    .unwrap(),
                k,
            })
            .collect();
        let d = data_update(&s, &records, &mask, 1e-8).unwrap();
        assert!(d.data().iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn full_pass_single_record_is_difference() {
        let s = field(8, 0.0);
        let psi = field(8, 1.0);
        let mask = PupilMask::full_pass(8).unwrap();
        let rec = PupilRecord { psi: psi.clone(), k: WaveVector::ZERO };
        let d = data_update(&s, &[rec], &mask, 1e-14).unwrap();
        for ((a, b), c) in d.data().iter().zip(s.data().iter()).zip(psi.data().iter()) {
            assert!((a - (b - c)).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_records_rejected() {
        let s = field(8, 0.0);
        let mask = PupilMask::full_pass(8).unwrap();
        assert!(data_update(&s, &[], &mask, 1e-8).is_err());
    }

    #[test]
    fn constant_object_has_zero_tv_gradient() {
        let mut data = Array2::zeros((8, 8));
        data[[4, 4]] = Complex64::new(3.0, 1.0);
        let s = ComplexField::new(data, Domain::Frequency).unwrap();
        let g = tv_gradient(&s, 1e-8).unwrap();
        assert!(g.data().iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn real_positive_object_has_zero_phase_gradient() {
        let o = Array2::from_shape_fn((8, 8), |(r, c)| Complex64::new(1.0 + (r + c) as f64, 0.0));
        let g = phase_gradient_spatial(&o, 1e-8);
        assert!(g.iter().all(|v| v.norm() < 1e-15));
    }
}
