//! Exhaustive local search over integer k-shifts.
//!
//! A candidate image `|F⁻¹{O(u + k) M(u)}|²` is band-limited to offsets of at
//! most twice the mask reach, so its misfit against a measurement can be
//! evaluated exactly on a coarser grid: the in-band part of the measurement is
//! sampled on that grid and its out-of-band energy is a constant residual.

use std::cmp::Ordering;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Result;
use crate::optics::{
    simulate_image_intensity, CenteredFft, ComplexField, Domain, PupilMask, WaveVector,
};
use crate::raster::{check_same_shape, RealRaster};

/// Linear schedule from `delta_max` at the first sweep to `delta_min` at the last.
pub fn annealed_radius(iter: usize, total: usize, delta_max: u32, delta_min: u32) -> u32 {
    if total <= 1 {
        return delta_max;
    }
    let t = iter.min(total - 1) as f64 / (total - 1) as f64;
    let r = f64::from(delta_max) + (f64::from(delta_min) - f64::from(delta_max)) * t;
    r.round() as u32
}

fn is_smooth(mut m: usize) -> bool {
    for p in [2, 3, 5] {
        while m.is_multiple_of(p) {
            m /= p;
        }
    }
    m == 1
}

/// Side of the coarse grid used for misfit evaluation, or `n` when no
/// reduction is possible.
pub fn reduced_grid_size(n: usize, reach: usize) -> usize {
    let mut m = 4 * reach + 2;
    while m < n && !(m.is_multiple_of(2) && is_smooth(m)) {
        m += 1;
    }
    m.min(n)
}

/// Sum of squared differences between a predicted image and a measurement.
pub fn image_misfit(
    spectrum: &ComplexField,
    mask: &PupilMask,
    intensity: &RealRaster,
    k: WaveVector,
) -> Result<f64> {
    check_same_shape(spectrum.data().dim(), intensity.dim())?;
    let pred = simulate_image_intensity(spectrum, mask, k)?;
    Ok(pred.iter().zip(intensity.iter()).map(|(a, b)| (a - b).powi(2)).sum())
}

/// A measurement resampled for repeated misfit evaluation.
#[derive(Debug, Clone)]
pub struct PreparedIntensity {
    samples: RealRaster,
    residual: f64,
}

#[derive(Debug)]
pub struct MisfitEvaluator<'a> {
    spectrum: &'a Array2<Complex64>,
    mask: &'a PupilMask,
    n: usize,
    m: usize,
    plan: Arc<CenteredFft>,
}

impl<'a> MisfitEvaluator<'a> {
    pub fn new(spectrum: &'a ComplexField, mask: &'a PupilMask) -> Result<Self> {
        spectrum.expect_domain(Domain::Frequency, "spectrum")?;
        check_same_shape(spectrum.data().dim(), mask.raster().dim())?;
        Ok(Self::from_array(spectrum.data(), mask))
    }

    pub(crate) fn from_array(spectrum: &'a Array2<Complex64>, mask: &'a PupilMask) -> Self {
        let n = spectrum.nrows();
        let m = reduced_grid_size(n, mask.reach());
        Self { spectrum, mask, n, m, plan: CenteredFft::shared(m) }
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    /// Resamples a measurement for this evaluator's grid.
    pub fn prepare(&self, intensity: &RealRaster) -> Result<PreparedIntensity> {
        check_same_shape((self.n, self.n), intensity.dim())?;
        Ok(prepare_intensity(intensity, self.m))
    }

    pub fn misfit(&self, prepared: &PreparedIntensity, k: WaveVector) -> f64 {
        let (n, m) = (self.n as i64, self.m as i64);
        let (cn, cm) = (n / 2, m / 2);
        let mut field = Array2::<Complex64>::zeros((self.m, self.m));
        for &(dy, dx) in self.mask.support() {
            let src = [
                (cn + dy + k.ky).rem_euclid(n) as usize,
                (cn + dx + k.kx).rem_euclid(n) as usize,
            ];
            field[[(cm + dy) as usize, (cm + dx) as usize]] = self.spectrum[src];
        }
        self.plan.inverse_in_place(&mut field);
        let scale = (m as f64 / n as f64).powi(2);
        let ssd: f64 = field
            .iter()
            .zip(prepared.samples.iter())
            .map(|(v, i)| (v.norm_sqr() * scale - i).powi(2))
            .sum();
        ssd / scale + prepared.residual
    }

    /// Best on-grid shift within `radius` of `center` (Chebyshev distance),
    /// with ties going to the smallest displacement.
    pub fn search(
        &self,
        prepared: &PreparedIntensity,
        center: WaveVector,
        radius: u32,
    ) -> (WaveVector, f64) {
        let r = i64::from(radius);
        let offsets = (-r..=r).flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)));
        self.best_of(prepared, center, offsets)
            .unwrap_or((center, f64::INFINITY))
    }

    /// Minimizes the misfit over `center + offset`, skipping off-grid
    /// candidates. Ties go to the smallest `|offset|`, then lexicographically
    /// smallest `(dx, dy)`.
    pub fn best_of(
        &self,
        prepared: &PreparedIntensity,
        center: WaveVector,
        offsets: impl IntoIterator<Item = (i64, i64)>,
    ) -> Option<(WaveVector, f64)> {
        let mut best: Option<((f64, i64, i64, i64), WaveVector)> = None;
        for (dx, dy) in offsets {
            let k = center.offset(dx, dy);
            if self.mask.check_on_grid(k).is_err() {
                continue;
            }
            let key = (self.misfit(prepared, k), dx * dx + dy * dy, dx, dy);
            if best.as_ref().is_none_or(|(b, _)| compare_keys(&key, b) == Ordering::Less) {
                best = Some((key, k));
            }
        }
        best.map(|((f, ..), k)| (k, f))
    }
}

fn compare_keys(a: &(f64, i64, i64, i64), b: &(f64, i64, i64, i64)) -> Ordering {
    let fa = if a.0.is_nan() { f64::INFINITY } else { a.0 };
    let fb = if b.0.is_nan() { f64::INFINITY } else { b.0 };
    fa.total_cmp(&fb)
        .then(a.1.cmp(&b.1))
        .then(a.2.cmp(&b.2))
        .then(a.3.cmp(&b.3))
}

pub(crate) fn prepare_intensity(intensity: &RealRaster, m: usize) -> PreparedIntensity {
    let n = intensity.nrows();
    if m >= n {
        return PreparedIntensity { samples: intensity.clone(), residual: 0.0 };
    }
    let mut spec = intensity.mapv(|v| Complex64::new(v, 0.0));
    CenteredFft::shared(n).forward_in_place(&mut spec);
    let total: f64 = intensity.iter().map(|v| v * v).sum();
    let (cn, cm) = (n / 2, m / 2);
    let half = cm - 1;
    let mut crop = Array2::<Complex64>::zeros((m, m));
    let mut in_band = 0.0;
    for r in 0..=2 * half {
        for c in 0..=2 * half {
            let v = spec[[cn - half + r, cn - half + c]];
            in_band += v.norm_sqr();
            crop[[cm - half + r, cm - half + c]] = v;
        }
    }
    CenteredFft::shared(m).inverse_in_place(&mut crop);
    let scale = m as f64 / n as f64;
    PreparedIntensity {
        samples: crop.mapv(|v| v.re * scale),
        residual: (total - in_band).max(0.0),
    }
}

/// Best shift for one record within `radius` of `k_hat`.
pub fn local_k_search(
    spectrum: &ComplexField,
    mask: &PupilMask,
    intensity: &RealRaster,
    k_hat: WaveVector,
    radius: u32,
) -> Result<WaveVector> {
    mask.check_on_grid(k_hat)?;
    let eval = MisfitEvaluator::new(spectrum, mask)?;
    let prepared = eval.prepare(intensity)?;
    Ok(eval.search(&prepared, k_hat, radius).0)
}
