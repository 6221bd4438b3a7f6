//! Fused per-record projection for the reconstruction loop.
//!
//! Computes the same values as extracting an aperture, inverse transforming,
//! replacing the modulus and transforming back, but works on raw (unshifted,
//! unnormalized) transforms: the centering signs cancel through the modulus
//! replacement, only the rows that carry the aperture are transformed where
//! the rest are zero or unused, and the image-plane field stays transposed so
//! the intensity rasters are pre-transposed instead.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::optics::{transpose_into, CenteredFft, PupilMask, WaveVector};
use crate::raster::RealRaster;

/// Reusable work buffers for one thread.
pub(crate) struct Workspace {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            a: vec![Complex64::new(0.0, 0.0); n * n],
            b: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }
}

/// Measurement of one record in transposed layout.
pub(crate) struct TransposedImage {
    intensity: Vec<f64>,
    amplitude: Vec<f64>,
}

impl TransposedImage {
    pub(crate) fn new(intensity: &RealRaster) -> Self {
        let t = intensity.t();
        Self {
            intensity: t.iter().copied().collect(),
            amplitude: t.iter().map(|v| v.max(0.0).sqrt()).collect(),
        }
    }
}

pub(crate) struct ProjectionKernel<'a> {
    n: usize,
    plan: Arc<CenteredFft>,
    mask: &'a PupilMask,
    band: std::ops::Range<usize>,
}

#[inline]
fn sign(r: usize, c: usize) -> f64 {
    if (r + c).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl<'a> ProjectionKernel<'a> {
    pub(crate) fn new(n: usize, mask: &'a PupilMask) -> Self {
        let plan = CenteredFft::shared(n);
        let band = plan.band(mask.reach());
        Self { n, plan, mask, band }
    }

    /// Constrained pupil-plane values on the mask support (in support order)
    /// and the image misfit before the constraint.
    pub(crate) fn project(
        &self,
        ws: &mut Workspace,
        spectrum: &Array2<Complex64>,
        k: WaveVector,
        image: &TransposedImage,
        eps: f64,
    ) -> (Vec<Complex64>, f64) {
        let n = self.n;
        let ni = n as i64;
        let c = ni / 2;
        let weights = self.mask.raster();
        ws.a.fill(Complex64::new(0.0, 0.0));
        for &(dy, dx) in self.mask.support() {
            let (r, col) = ((c + dy) as usize, (c + dx) as usize);
            let src = [
                (c + dy + k.ky).rem_euclid(ni) as usize,
                (c + dx + k.kx).rem_euclid(ni) as usize,
            ];
            ws.a[r * n + col] = spectrum[src] * (weights[[r, col]] * sign(r, col));
        }
        self.plan.process_rows(&mut ws.a, self.band.clone(), true);
        transpose_into(&ws.a, &mut ws.b, n);
        self.plan.process_rows(&mut ws.b, 0..n, true);

        let norm = 1.0 / (n * n) as f64;
        let mut misfit = 0.0;
        for (idx, ((v, &i), &a)) in ws
            .b
            .iter_mut()
            .zip(&image.intensity)
            .zip(&image.amplitude)
            .enumerate()
        {
            let raw = v.norm_sqr();
            let t = raw * norm;
            misfit += (t - i) * (t - i);
            *v = if t > eps {
                *v * (a / raw.sqrt())
            } else {
                Complex64::new(a * sign(idx / n, idx % n), 0.0)
            };
        }

        self.plan.process_rows(&mut ws.b, 0..n, false);
        transpose_into(&ws.b, &mut ws.a, n);
        self.plan.process_rows(&mut ws.a, self.band.clone(), false);
        let scale = 1.0 / n as f64;
        let values = self
            .mask
            .support()
            .iter()
            .map(|&(dy, dx)| {
                let (r, col) = ((c + dy) as usize, (c + dx) as usize);
                ws.a[r * n + col] * (scale * sign(r, col))
            })
            .collect();
        (values, misfit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{extract_aperture, make_circular_mask};
    use crate::solver::projection::replace_modulus;

    #[test]
    fn matches_unfused_pipeline() {
        let n = 32;
        let mask = make_circular_mask(5.0, n).unwrap();
        let spectrum = Array2::from_shape_fn((n, n), |(r, c)| {
            Complex64::new(((r * 7 + c * 3) % 11) as f64 - 5.0, ((r * c) % 5) as f64 - 2.0)
        });
        let intensity = RealRaster::from_shape_fn((n, n), |(r, c)| {
            if r == 3 && c == 4 { 0.0 } else { 0.5 + ((r + 2 * c) % 7) as f64 * 0.1 }
        });
        let k = WaveVector::new(4, -7);
        let eps = 1e-8;

        let plan = CenteredFft::shared(n);
        let mut psi = extract_aperture(&spectrum, &mask, k);
        plan.inverse_in_place(&mut psi);
        let want_misfit: f64 =
            psi.iter().zip(intensity.iter()).map(|(v, i)| (v.norm_sqr() - i).powi(2)).sum();
        replace_modulus(&mut psi, &intensity, eps);
        plan.forward_in_place(&mut psi);

        let kernel = ProjectionKernel::new(n, &mask);
        let mut ws = Workspace::new(n);
        let (values, misfit) =
            kernel.project(&mut ws, &spectrum, k, &TransposedImage::new(&intensity), eps);
        assert!((misfit - want_misfit).abs() <= 1e-12 * want_misfit);
        let c = (n / 2) as i64;
        for (&(dy, dx), v) in mask.support().iter().zip(&values) {
            let want = psi[[(c + dy) as usize, (c + dx) as usize]];
            assert!((v - want).norm() < 1e-12, "{v} vs {want}");
        }
    }

    #[test]
    fn zero_field_takes_zero_phase() {
        let n = 8;
        let mask = make_circular_mask(2.0, n).unwrap();
        let spectrum = Array2::zeros((n, n));
        let intensity = RealRaster::from_elem((n, n), 4.0);
        let kernel = ProjectionKernel::new(n, &mask);
        let (values, _) = kernel.project(
            &mut Workspace::new(n),
            &spectrum,
            WaveVector::ZERO,
            &TransposedImage::new(&intensity),
            1e-8,
        );
        let plan = CenteredFft::shared(n);
        let want = plan.forward(&Array2::from_elem((n, n), Complex64::new(2.0, 0.0)));
        let c = (n / 2) as i64;
        for (&(dy, dx), v) in mask.support().iter().zip(&values) {
            assert!((v - want[[(c + dy) as usize, (c + dx) as usize]]).norm() < 1e-12);
        }
    }
}
