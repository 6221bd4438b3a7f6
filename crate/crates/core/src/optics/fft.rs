//! Centered, unitary 2D DFT.
//!
//! With `x` and `u` measured from the grid center, the forward transform is
//! `X(u) = (1/N) Σ_x o(x) exp(-2πi u·x / N)` and the inverse uses the opposite
//! sign. For even N the centering reduces to a `(-1)^(row+col)` checkerboard
//! applied before and after a plain FFT, so no explicit rolls are needed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{ComplexField, Domain};
use crate::error::Result;

pub struct CenteredFft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CenteredFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CenteredFft").field("n", &self.n).finish()
    }
}

impl CenteredFft {
    /// Plans transforms for an `n×n` grid. `n` must be even.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2 && n.is_multiple_of(2), "centered FFT needs an even size, got {n}");
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Process-wide cached plan for size `n`.
    pub fn shared(n: usize) -> Arc<CenteredFft> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CenteredFft>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(CenteredFft::new(n)))
            .clone()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn forward_in_place(&self, data: &mut Array2<Complex64>) {
        self.transform(data, &*self.forward);
    }

    pub fn inverse_in_place(&self, data: &mut Array2<Complex64>) {
        self.transform(data, &*self.inverse);
    }

    /// Unnormalized 1D transforms of whole rows `rows` of a row-major `n×n` buffer.
    pub(crate) fn process_rows(&self, buf: &mut [Complex64], rows: std::ops::Range<usize>, inverse: bool) {
        let plan = if inverse { &self.inverse } else { &self.forward };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(&mut buf[rows.start * self.n..rows.end * self.n], &mut scratch);
    }

    /// Rows within `half_width` of the center.
    pub(crate) fn band(&self, half_width: usize) -> std::ops::Range<usize> {
        let c = self.n / 2;
        c.saturating_sub(half_width)..(c + half_width + 1).min(self.n)
    }

    pub fn forward(&self, data: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = data.to_owned();
        self.forward_in_place(&mut out);
        out
    }

    pub fn inverse(&self, data: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = data.to_owned();
        self.inverse_in_place(&mut out);
        out
    }

    fn transform(&self, data: &mut Array2<Complex64>, plan: &dyn Fft<f64>) {
        let n = self.n;
        assert_eq!(data.dim(), (n, n), "raster does not match planned size");
        if !data.is_standard_layout() {
            *data = data.as_standard_layout().into_owned();
        }
        checkerboard(data, 1.0);
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let buf = data.as_slice_mut().expect("standard layout");
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
        checkerboard(data, 1.0 / n as f64);
    }
}

fn checkerboard(data: &mut Array2<Complex64>, scale: f64) {
    let n = data.ncols();
    let buf = data.as_slice_mut().expect("standard layout");
    for (r, row) in buf.chunks_exact_mut(n).enumerate() {
        let (even, odd) = if r % 2 == 0 { (scale, -scale) } else { (-scale, scale) };
        for pair in row.chunks_exact_mut(2) {
            pair[0] *= even;
            pair[1] *= odd;
        }
    }
}

/// Blocked out-of-place transpose of a row-major `n×n` buffer.
pub(crate) fn transpose_into(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const B: usize = 32;
    for rb in (0..n).step_by(B) {
        let r_end = (rb + B).min(n);
        for cb in (0..n).step_by(B) {
            let c_end = (cb + B).min(n);
            for r in rb..r_end {
                let row = &src[r * n + cb..r * n + c_end];
                for (c, v) in (cb..c_end).zip(row) {
                    dst[c * n + r] = *v;
                }
            }
        }
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    const B: usize = 16;
    for rb in (0..n).step_by(B) {
        for cb in (rb..n).step_by(B) {
            for r in rb..(rb + B).min(n) {
                let start = if cb == rb { r + 1 } else { cb };
                for c in start..(cb + B).min(n) {
                    buf.swap(r * n + c, c * n + r);
                }
            }
        }
    }
}

/// Forward centered transform of a spatial field.
pub fn fft_centered(field: &ComplexField) -> Result<ComplexField> {
    field.expect_domain(Domain::Spatial, "fft_centered input")?;
    let out = CenteredFft::shared(field.size()).forward(field.data());
    Ok(ComplexField::from_parts(out, Domain::Frequency))
}

/// Inverse centered transform of a frequency-domain field.
pub fn ifft_centered(field: &ComplexField) -> Result<ComplexField> {
    field.expect_domain(Domain::Frequency, "ifft_centered input")?;
    let out = CenteredFft::shared(field.size()).inverse(field.data());
    Ok(ComplexField::from_parts(out, Domain::Spatial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(n: usize, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        ComplexField::new(data, Domain::Spatial).unwrap()
    }

    /// Direct O(N^4) centered DFT, independent of the FFT path.
    fn naive_centered_dft(field: &Array2<Complex64>, sign: f64) -> Array2<Complex64> {
        let n = field.nrows();
        let h = (n / 2) as f64;
        Array2::from_shape_fn((n, n), |(ur, uc)| {
            let (uy, ux) = (ur as f64 - h, uc as f64 - h);
            let mut acc = Complex64::new(0.0, 0.0);
            for ((sr, sc), v) in field.indexed_iter() {
                let (y, x) = (sr as f64 - h, sc as f64 - h);
                let angle = sign * 2.0 * std::f64::consts::PI * (ux * x + uy * y) / n as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            acc / n as f64
        })
    }

    #[test]
    fn matches_naive_dft() {
        let f = random_field(8, 3);
        let fast = fft_centered(&f).unwrap();
        let slow = naive_centered_dft(f.data(), -1.0);
        let err = (fast.data() - &slow).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "max error {err}");
    }

    #[test]
    fn centered_impulse_becomes_flat() {
        let n = 16;
        let mut data = Array2::zeros((n, n));
        data[[n / 2, n / 2]] = Complex64::new(1.0, 0.0);
        let spec = fft_centered(&ComplexField::new(data, Domain::Spatial).unwrap()).unwrap();
        for v in spec.data() {
            assert!((v.norm() - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_becomes_centered_impulse() {
        let n = 16;
        let data = Array2::from_elem((n, n), Complex64::new(1.0, 0.0));
        let spec = fft_centered(&ComplexField::new(data, Domain::Spatial).unwrap()).unwrap();
        for ((r, c), v) in spec.data().indexed_iter() {
            let expected = if (r, c) == (n / 2, n / 2) { n as f64 } else { 0.0 };
            assert!((v.norm() - expected).abs() < 1e-12, "({r},{c}) = {v}");
        }
    }

    #[test]
    fn round_trip_8x8() {
        let f = random_field(8, 11);
        let back = ifft_centered(&fft_centered(&f).unwrap()).unwrap();
        let err = (back.data() - f.data()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
        assert_eq!(back.domain(), Domain::Spatial);
    }

    #[test]
    fn domain_tags_are_enforced() {
        let f = random_field(4, 1);
        assert!(ifft_centered(&f).is_err());
        let spec = fft_centered(&f).unwrap();
        assert!(fft_centered(&spec).is_err());
    }
}
