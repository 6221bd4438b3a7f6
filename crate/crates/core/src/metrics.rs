//! Reconstruction quality metrics and aperture-overlap geometry.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kspace::KSpaceEstimate;
use crate::optics::{ComplexField, Domain};
use crate::raster::check_same_shape;

/// Amplitude threshold on the ground truth for the masked phase metric.
pub const PHASE_SUPPORT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub amplitude_rmse: f64,
    /// Offset-corrected phase RMSE over every pixel.
    pub phase_rmse: f64,
    /// Offset-corrected phase RMSE restricted to `|truth| > 0.05`.
    pub phase_rmse_masked: f64,
    pub k_rmse: f64,
    pub per_record_k_error: Vec<f64>,
    /// Neighboring-aperture overlap; unknown when the truth carries no optics.
    pub overlap_fraction: Option<f64>,
}

impl EvalReport {
    /// Fixed-order, human-readable table.
    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{:<24}{:>12.6}\n", "amplitude_rmse", self.amplitude_rmse));
        s.push_str(&format!("{:<24}{:>12.6}\n", "phase_rmse", self.phase_rmse));
        s.push_str(&format!("{:<24}{:>12.6}\n", "phase_rmse_masked", self.phase_rmse_masked));
        s.push_str(&format!("{:<24}{:>12.6}\n", "k_rmse", self.k_rmse));
        let exact = self.per_record_k_error.iter().filter(|&&e| e == 0.0).count();
        s.push_str(&format!(
            "{:<24}{:>12}\n",
            "k_exact",
            format!("{exact}/{}", self.per_record_k_error.len())
        ));
        match self.overlap_fraction {
            Some(o) => s.push_str(&format!("{:<24}{:>12.6}\n", "overlap_fraction", o)),
            None => s.push_str(&format!("{:<24}{:>12}\n", "overlap_fraction", "n/a")),
        }
        s
    }
}

fn check_pair(recovered: &ComplexField, truth: &ComplexField) -> Result<()> {
    check_same_shape(truth.data().dim(), recovered.data().dim())?;
    if recovered.domain() != Domain::Spatial || truth.domain() != Domain::Spatial {
        return Err(Error::validation("metrics compare spatial-domain fields"));
    }
    Ok(())
}

/// `sqrt(mean((|recovered| - |truth|)²))`.
pub fn amplitude_rmse(recovered: &ComplexField, truth: &ComplexField) -> Result<f64> {
    check_pair(recovered, truth)?;
    let n = recovered.data().len() as f64;
    let sum: f64 = recovered
        .data()
        .iter()
        .zip(truth.data())
        .map(|(a, b)| (a.norm() - b.norm()).powi(2))
        .sum();
    Ok((sum / n).sqrt())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Phase RMSE after removing the mean phase difference.
///
/// Pixel differences are wrapped to `(-π, π]` first. The mean is taken
/// around the circular mean so that a constant offset near `±π` is removed
/// cleanly instead of straddling the branch cut.
pub fn phase_rmse_offset_corrected(recovered: &ComplexField, truth: &ComplexField) -> Result<f64> {
    check_pair(recovered, truth)?;
    let diffs: Vec<f64> = recovered
        .data()
        .iter()
        .zip(truth.data())
        .map(|(a, b)| wrap_phase(a.arg() - b.arg()))
        .collect();
    Ok(offset_corrected_rms(&diffs))
}

/// [`phase_rmse_offset_corrected`] restricted to pixels with `|truth| > threshold`.
pub fn phase_rmse_offset_corrected_masked(
    recovered: &ComplexField,
    truth: &ComplexField,
    threshold: f64,
) -> Result<f64> {
    check_pair(recovered, truth)?;
    let diffs: Vec<f64> = recovered
        .data()
        .iter()
        .zip(truth.data())
        .filter(|(_, b)| b.norm() > threshold)
        .map(|(a, b)| wrap_phase(a.arg() - b.arg()))
        .collect();
    Ok(offset_corrected_rms(&diffs))
}

fn offset_corrected_rms(diffs: &[f64]) -> f64 {
    if diffs.is_empty() {
        return 0.0;
    }
    let n = diffs.len() as f64;
    let (s, c) = diffs
        .iter()
        .fold((0.0, 0.0), |(s, c), &e| (s + e.sin(), c + e.cos()));
    let center = if s == 0.0 && c == 0.0 { 0.0 } else { s.atan2(c) };
    let offset = center + diffs.iter().map(|&e| wrap_phase(e - center)).sum::<f64>() / n;
    let mse = diffs
        .iter()
        .map(|&e| wrap_phase(e - offset).powi(2))
        .sum::<f64>()
        / n;
    mse.sqrt()
}

/// Per-record Euclidean k error in pixels.
pub fn per_record_k_error(estimate: &KSpaceEstimate, truth: &KSpaceEstimate) -> Result<Vec<f64>> {
    if estimate.len() != truth.len() {
        return Err(Error::validation(format!(
            "k estimate has {} entries, truth has {}",
            estimate.len(),
            truth.len()
        )));
    }
    Ok(estimate
        .shifts
        .iter()
        .zip(&truth.shifts)
        .map(|(a, b)| ((*a - *b).norm_sqr() as f64).sqrt())
        .collect())
}

/// `sqrt(mean ‖k̂ - k‖²)` over records.
pub fn k_rmse(estimate: &KSpaceEstimate, truth: &KSpaceEstimate) -> Result<f64> {
    let errs = per_record_k_error(estimate, truth)?;
    if errs.is_empty() {
        return Ok(0.0);
    }
    Ok((errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt())
}

/// Area shared by two disks of radius `r` whose centers are `d` apart,
/// as a fraction of one disk's area.
pub fn overlap_fraction(center_distance: f64, radius: f64) -> f64 {
    let (d, r) = (center_distance, radius);
    if d >= 2.0 * r {
        return 0.0;
    }
    let lens = 2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt();
    lens / (PI * r * r)
}

/// Pixel-count version of [`overlap_fraction`] for disks on the integer lattice,
/// with the second disk displaced along x by `d` (rounded to a pixel).
pub fn overlap_fraction_discrete(center_distance: f64, radius: f64) -> f64 {
    let d = center_distance.round() as i64;
    let reach = radius.ceil() as i64;
    let r2 = radius * radius;
    let inside = |x: i64, y: i64| ((x * x + y * y) as f64) <= r2;
    let mut area = 0usize;
    let mut both = 0usize;
    for y in -reach..=reach {
        for x in -reach..=reach {
            if inside(x, y) {
                area += 1;
                if inside(x - d, y) {
                    both += 1;
                }
            }
        }
    }
    both as f64 / area as f64
}

/// Radius giving the requested overlap fraction for centers `d` apart.
pub fn radius_for_overlap(center_distance: f64, target: f64) -> Result<f64> {
    if !(0.0 < target && target < 1.0) || center_distance.is_nan() || center_distance <= 0.0 {
        return Err(Error::validation(format!(
            "overlap target must be in (0, 1) and distance positive, got {target}, {center_distance}"
        )));
    }
    // overlap(d, r) rises monotonically from 0 at r = d/2 towards 1.
    let mut lo = center_distance / 2.0;
    let mut hi = center_distance;
    while overlap_fraction(center_distance, hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if overlap_fraction(center_distance, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kspace::Provenance;
    use crate::optics::WaveVector;
    use ndarray::Array2;
    use num_complex::Complex64;

    fn field(values: Vec<Complex64>, n: usize) -> ComplexField {
        ComplexField::new(Array2::from_shape_vec((n, n), values).unwrap(), Domain::Spatial).unwrap()
    }

    #[test]
    fn amplitude_rmse_cases() {
        let t = field((0..16).map(|i| Complex64::new(i as f64 / 16.0, 0.3)).collect(), 4);
        assert_eq!(amplitude_rmse(&t, &t).unwrap(), 0.0);
        let shifted = field(
            t.data().iter().map(|v| Complex64::from_polar(v.norm() + 0.1, v.arg())).collect(),
            4,
        );
        assert!((amplitude_rmse(&shifted, &t).unwrap() - 0.1).abs() < 1e-12);
        assert!((amplitude_rmse(&t.with_global_phase(1.3), &t).unwrap()).abs() < 1e-12);
        let small = field(vec![Complex64::new(0.0, 0.0); 4], 2);
        assert!(amplitude_rmse(&small, &t).is_err());
    }

    #[test]
    fn phase_rmse_half_plus_half_minus() {
        let t = field(vec![Complex64::new(1.0, 0.0); 16], 4);
        let r = field(
            (0..16)
                .map(|i| Complex64::from_polar(1.0, if i % 2 == 0 { 0.2 } else { -0.2 }))
                .collect(),
            4,
        );
        assert!((phase_rmse_offset_corrected(&r, &t).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn phase_rmse_ignores_global_offset_near_branch_cut() {
        let t = field((0..16).map(|i| Complex64::from_polar(1.0, 0.1 * i as f64)).collect(), 4);
        for phi in [0.0, 1.0, PI, -PI + 1e-13, 3.0] {
            let e = phase_rmse_offset_corrected(&t.with_global_phase(phi), &t).unwrap();
            assert!(e < 1e-12, "phi={phi} e={e}");
        }
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn k_rmse_cases() {
        let truth = KSpaceEstimate::new(
            vec![WaveVector::new(0, 0), WaveVector::new(5, -3), WaveVector::new(-7, 2)],
            Provenance::GroundTruth,
        );
        assert_eq!(k_rmse(&truth, &truth).unwrap(), 0.0);
        let off = KSpaceEstimate::new(
            truth.shifts.iter().map(|k| k.offset(3, 4)).collect(),
            Provenance::External,
        );
        assert!((k_rmse(&off, &truth).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(k_rmse(&off, &truth).unwrap(), k_rmse(&truth, &off).unwrap());
        let short = KSpaceEstimate::new(vec![WaveVector::ZERO], Provenance::External);
        assert!(k_rmse(&short, &truth).is_err());
    }

    #[test]
    fn overlap_endpoints_and_monotonicity() {
        assert!((overlap_fraction(0.0, 5.0) - 1.0).abs() < 1e-15);
        assert_eq!(overlap_fraction(10.0, 5.0), 0.0);
        assert_eq!(overlap_fraction(12.0, 5.0), 0.0);
        assert!(overlap_fraction(9.999_999, 5.0) < 1e-9);
        let mut prev = 1.0;
        for i in 1..200 {
            let v = overlap_fraction(i as f64 * 0.05, 5.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn overlap_reference_values() {
        // mpmath evaluation of the lens-area formula with r = 1.
        let cases = [
            (0.25, 0.841_260_499_772_752_5),
            (0.75, 0.533_974_541_389_520_5),
            (1.0, 0.391_002_218_955_770_6),
            (1.75, 0.052_045_548_743_758_81),
        ];
        for (d, want) in cases {
            assert!((overlap_fraction(d, 1.0) - want).abs() < 1e-14, "d={d}");
        }
    }

    #[test]
    fn radius_solver_inverts_overlap() {
        let d = 11.810_498_697_705_99;
        let r = radius_for_overlap(d, 0.54).unwrap();
        // mpmath root: 15.964416712231357
        assert!((r - 15.964_416_712_231_357).abs() < 1e-9);
        assert!((overlap_fraction(d, r) - 0.54).abs() < 1e-12);
    }

    #[test]
    fn discrete_overlap_tracks_analytic() {
        for (d, r) in [(12.0, 16.0), (8.0, 20.0), (20.0, 16.0)] {
            let a = overlap_fraction(d, r);
            let b = overlap_fraction_discrete(d, r);
            assert!((a - b).abs() < 0.02, "d={d} r={r}: {a} vs {b}");
        }
    }
}
