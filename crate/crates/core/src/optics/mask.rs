use ndarray::Array2;

use super::geometry::{check_on_grid, max_shift, WaveVector};
use crate::error::{Error, Result};
use crate::raster::RealRaster;

/// Binary pupil mask centered at `(N/2, N/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PupilMask {
    mask: RealRaster,
    radius: f64,
    /// Offsets `(dy, dx)` from the grid center where the mask is nonzero.
    support: Vec<(i64, i64)>,
    full_pass: bool,
}

/// Disk of the given radius (pixels) around the grid center.
pub fn make_circular_mask(radius: f64, grid_size: usize) -> Result<PupilMask> {
    if grid_size < 2 || !grid_size.is_multiple_of(2) {
        return Err(Error::validation(format!(
            "grid size must be even and at least 2, got {grid_size}"
        )));
    }
    let half = grid_size as f64 / 2.0;
    if !(radius > 0.0 && radius < half) {
        return Err(Error::validation(format!(
            "mask radius must lie in (0, {half}), got {radius}"
        )));
    }
    let c = (grid_size / 2) as i64;
    let r2 = radius * radius;
    let mut support = Vec::new();
    let mask = Array2::from_shape_fn((grid_size, grid_size), |(row, col)| {
        let dy = row as i64 - c;
        let dx = col as i64 - c;
        if ((dx * dx + dy * dy) as f64) <= r2 {
            support.push((dy, dx));
            1.0
        } else {
            0.0
        }
    });
    Ok(PupilMask {
        mask,
        radius,
        support,
        full_pass: false,
    })
}

impl PupilMask {
    /// All-ones mask. Only the zero wavevector is on-grid for it.
    pub fn full_pass(grid_size: usize) -> Result<Self> {
        if grid_size < 2 || !grid_size.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "grid size must be even and at least 2, got {grid_size}"
            )));
        }
        let c = (grid_size / 2) as i64;
        let n = grid_size as i64;
        let support = (0..n)
            .flat_map(|r| (0..n).map(move |col| (r - c, col - c)))
            .collect();
        Ok(Self {
            mask: RealRaster::ones((grid_size, grid_size)),
            radius: std::f64::consts::SQRT_2 * grid_size as f64 / 2.0,
            support,
            full_pass: true,
        })
    }

    pub fn raster(&self) -> &RealRaster {
        &self.mask
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid_size(&self) -> usize {
        self.mask.nrows()
    }

    pub fn is_full_pass(&self) -> bool {
        self.full_pass
    }

    pub fn support(&self) -> &[(i64, i64)] {
        &self.support
    }

    pub fn support_count(&self) -> usize {
        self.support.len()
    }

    /// Smallest half-width of a square around the center containing the support.
    pub fn reach(&self) -> usize {
        self.support
            .iter()
            .map(|&(dy, dx)| dy.unsigned_abs().max(dx.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_shift(&self) -> i64 {
        if self.full_pass {
            0
        } else {
            max_shift(self.grid_size(), self.radius)
        }
    }

    pub fn check_on_grid(&self, k: WaveVector) -> Result<()> {
        check_on_grid(k, self.max_shift())
    }

    /// Mask translated so its center sits at `center + k` (circular roll).
    pub fn shifted(&self, k: WaveVector) -> RealRaster {
        let n = self.grid_size() as i64;
        let c = n / 2;
        let mut out = RealRaster::zeros(self.mask.dim());
        for &(dy, dx) in &self.support {
            let r = (c + dy + k.ky).rem_euclid(n) as usize;
            let col = (c + dx + k.kx).rem_euclid(n) as usize;
            out[[r, col]] = 1.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_pixel_disk_is_single_center_pixel() {
        let m = make_circular_mask(0.5, 4).unwrap();
        assert_eq!(m.support_count(), 1);
        assert_eq!(m.raster()[[2, 2]], 1.0);
    }

    #[test]
    fn radius_25_count_matches_brute_force() {
        // Independent count of lattice points with x²+y² <= 625: 1961.
        let m = make_circular_mask(25.0, 256).unwrap();
        assert_eq!(m.support_count(), 1961);
        assert!((1925..=2003).contains(&m.support_count()));
        assert_eq!(m.raster().sum() as usize, 1961);
    }

    #[test]
    fn area_within_two_percent_for_large_radii() {
        for r in [10.0, 12.5, 16.0, 25.0, 40.7, 60.0] {
            let m = make_circular_mask(r, 256).unwrap();
            let area = std::f64::consts::PI * r * r;
            let rel = (m.support_count() as f64 - area).abs() / area;
            assert!(rel <= 0.02, "r={r} rel={rel}");
        }
    }

    #[test]
    fn rejects_out_of_range_radius() {
        assert!(make_circular_mask(128.0, 256).is_err());
        assert!(make_circular_mask(0.0, 256).is_err());
        assert!(make_circular_mask(-2.0, 256).is_err());
        assert!(make_circular_mask(f64::NAN, 256).is_err());
    }

    #[test]
    fn shifted_mask_moves_center() {
        let m = make_circular_mask(3.0, 32).unwrap();
        let s = m.shifted(WaveVector::new(5, -2));
        assert_eq!(s[[14, 21]], 1.0);
        assert_eq!(s.sum(), m.raster().sum());
        assert_eq!(m.max_shift(), 13);
        assert!(m.check_on_grid(WaveVector::new(13, -13)).is_ok());
        assert!(m.check_on_grid(WaveVector::new(14, 0)).is_err());
    }
}
