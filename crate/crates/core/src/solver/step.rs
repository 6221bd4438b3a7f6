use crate::error::{Error, Result};
use crate::optics::{ComplexField, Domain, PupilMask, WaveVector};
use crate::raster::{check_same_shape, RealRaster};

/// Aperture coverage `Σ_j |M(u - k_j)| / max|M|`: how many apertures see each
/// frequency.
pub fn step_size_alpha(mask: &PupilMask, shifts: &[WaveVector]) -> Result<RealRaster> {
    let n = mask.grid_size() as i64;
    let c = n / 2;
    let m = mask.raster();
    let peak = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if peak == 0.0 {
        return Err(Error::validation("mask is identically zero"));
    }
    let mut alpha = RealRaster::zeros(m.dim());
    for &k in shifts {
        mask.check_on_grid(k)?;
        for &(dy, dx) in mask.support() {
            let w = m[[(c + dy) as usize, (c + dx) as usize]].abs();
            alpha[[
                (c + dy + k.ky).rem_euclid(n) as usize,
                (c + dx + k.kx).rem_euclid(n) as usize,
            ]] += w / peak;
        }
    }
    Ok(alpha)
}

/// `Ô - α·data - β·tv - γ·phase`.
pub fn update_spectrum(
    spectrum: &ComplexField,
    data: &ComplexField,
    tv: &ComplexField,
    phase: &ComplexField,
    alpha: &RealRaster,
    beta: f64,
    gamma: f64,
) -> Result<ComplexField> {
    for (what, f) in [("spectrum", spectrum), ("data", data), ("tv", tv), ("phase", phase)] {
        f.expect_domain(Domain::Frequency, what)?;
        check_same_shape(spectrum.data().dim(), f.data().dim())?;
    }
    check_same_shape(spectrum.data().dim(), alpha.dim())?;
    let mut out = spectrum.data().clone();
    ndarray::Zip::from(&mut out)
        .and(data.data())
        .and(tv.data())
        .and(phase.data())
        .and(alpha)
        .for_each(|o, &d, &t, &p, &a| *o -= d * a + t * beta + p * gamma);
    Ok(ComplexField::from_parts(out, Domain::Frequency))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::make_circular_mask;

    #[test]
    fn coverage_counts_overlaps() {
        let mask = make_circular_mask(3.0, 16).unwrap();
        let ks = [WaveVector::ZERO, WaveVector::new(1, 0)];
        let a = step_size_alpha(&mask, &ks).unwrap();
        assert_eq!(a[[8, 8]], 2.0);
        assert_eq!(a[[8, 12]], 1.0);
        assert_eq!(a[[8, 4]], 0.0);
        let total: f64 = a.sum();
        assert_eq!(total, 2.0 * mask.support_count() as f64);
    }

    #[test]
    fn zero_weights_leave_only_data_step() {
        let n = 4;
        let s = ComplexField::zeros(n, Domain::Frequency).unwrap();
        let d = ComplexField::new(
            ndarray::Array2::from_elem((n, n), num_complex::Complex64::new(1.0, -1.0)),
            Domain::Frequency,
        )
        .unwrap();
        let alpha = RealRaster::from_elem((n, n), 0.5);
        let out = update_spectrum(&s, &d, &d, &d, &alpha, 0.0, 0.0).unwrap();
        assert!(out
            .data()
            .iter()
            .all(|v| (*v - num_complex::Complex64::new(-0.5, 0.5)).norm() < 1e-15));
    }
}
