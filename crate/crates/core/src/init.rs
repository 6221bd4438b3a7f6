//! Initial k-space estimates.
//!
//! Two classical localizers (a pupil-plane matched filter and a coarse
//! image-misfit grid search), ground truth for synthetic sets, and the JSON
//! prediction file written by external localizers.

use std::collections::BTreeMap;
use std::path::Path;

use log::warn;
use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_json, write_json};
use crate::kspace::{KSpaceEstimate, Provenance};
use crate::optics::{ComplexField, Domain, PupilMask, WaveVector};
use crate::raster::to_f64;
use crate::sim::MeasurementSet;
use crate::solver::MisfitEvaluator;

/// Fraction of the per-record maximum above which a pupil pixel counts as
/// illuminated.
pub const PUPIL_THRESHOLD: f64 = 0.1;

pub fn ground_truth_init(ms: &MeasurementSet) -> Result<KSpaceEstimate> {
    ms.true_k()
        .ok_or_else(|| Error::validation("measurement set carries no ground-truth shifts"))
}

/// Matched-filter localization of the aperture disk in each pupil raster.
///
/// Pixels at or above [`PUPIL_THRESHOLD`] of the record maximum are set to one
/// and correlated with the disk template over all on-grid centers. A plateau
/// of equal maxima resolves to its centroid. Records with an all-zero pupil
/// raster get `(0, 0)` and are listed in `fallback_records`.
pub fn pupil_support_init(ms: &MeasurementSet) -> Result<KSpaceEstimate> {
    ms.validate()?;
    let mask = ms.mask()?;
    let located: Vec<Option<WaveVector>> = ms
        .records
        .par_iter()
        .map(|r| locate_disk(&r.pupil_intensity, &mask))
        .collect();
    let mut est = KSpaceEstimate::new(Vec::with_capacity(ms.len()), Provenance::Classical);
    for (i, k) in located.into_iter().enumerate() {
        match k {
            Some(k) => est.shifts.push(k),
            None => {
                warn!("record {i}: pupil raster is empty, using (0, 0)");
                est.shifts.push(WaveVector::ZERO);
                est.fallback_records.push(i);
            }
        }
    }
    Ok(est)
}

fn locate_disk(pupil: &Array2<f32>, mask: &PupilMask) -> Option<WaveVector> {
    let peak = pupil.iter().fold(0.0f32, |a, &v| a.max(v));
    if peak <= 0.0 {
        return None;
    }
    let n = pupil.nrows() as i64;
    let c = n / 2;
    let bound = mask.max_shift();
    let side = (2 * bound + 1) as usize;
    let cut = f64::from(peak) * PUPIL_THRESHOLD;
    let mut score = Array2::<u32>::zeros((side, side));
    for ((r, col), &v) in pupil.indexed_iter() {
        if f64::from(v) < cut {
            continue;
        }
        for &(dy, dx) in mask.support() {
            let ky = r as i64 - c - dy;
            let kx = col as i64 - c - dx;
            if ky.abs() <= bound && kx.abs() <= bound {
                score[[(ky + bound) as usize, (kx + bound) as usize]] += 1;
            }
        }
    }
    let best = *score.iter().max()?;
    let (mut sx, mut sy, mut count) = (0i64, 0i64, 0i64);
    for ((r, col), &s) in score.indexed_iter() {
        if s == best {
            sy += r as i64 - bound;
            sx += col as i64 - bound;
            count += 1;
        }
    }
    let centroid = |s: i64| ((s as f64 / count as f64).round() as i64).clamp(-bound, bound);
    Some(WaveVector::new(centroid(sx), centroid(sy)))
}

/// Grid search of the image misfit against a seed spectrum over shifts
/// `stride·(i, j)` within `[-bound, bound]²`.
pub fn coarse_misfit_init(
    ms: &MeasurementSet,
    seed: &ComplexField,
    stride: u32,
    bound: u32,
) -> Result<KSpaceEstimate> {
    ms.validate()?;
    seed.expect_domain(Domain::Frequency, "seed spectrum")?;
    if stride == 0 {
        return Err(Error::validation("stride must be at least 1"));
    }
    let mask = ms.mask()?;
    let b = i64::from(bound);
    if b > mask.max_shift() {
        return Err(Error::validation(format!(
            "search bound {b} exceeds the on-grid bound {}",
            mask.max_shift()
        )));
    }
    let eval = MisfitEvaluator::new(seed, &mask)?;
    let s = i64::from(stride);
    let steps: Vec<i64> = (-(b / s)..=b / s).map(|i| i * s).collect();
    let shifts = ms
        .records
        .par_iter()
        .map(|r| {
            let prepared = eval.prepare(&to_f64(&r.image_intensity))?;
            let offsets = steps.iter().flat_map(|&dy| steps.iter().map(move |&dx| (dx, dy)));
            eval.best_of(&prepared, WaveVector::ZERO, offsets)
                .map(|(k, _)| k)
                .ok_or_else(|| Error::validation("coarse search grid is empty"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KSpaceEstimate::new(shifts, Provenance::Classical))
}

/// Interchange format for externally predicted shifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionFile {
    pub source: String,
    pub predictions: Vec<Prediction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub index: usize,
    pub kx: f64,
    pub ky: f64,
}

impl PredictionFile {
    pub fn from_estimate(est: &KSpaceEstimate, source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            predictions: est
                .shifts
                .iter()
                .enumerate()
                .map(|(index, k)| Prediction { index, kx: k.kx as f64, ky: k.ky as f64 })
                .collect(),
        }
    }

    /// Rounds predictions to integer shifts and checks them against `ms`.
    pub fn to_estimate(&self, ms: &MeasurementSet) -> Result<KSpaceEstimate> {
        let bound = ms.mask()?.max_shift();
        let mut by_index = BTreeMap::new();
        for p in &self.predictions {
            if p.index >= ms.len() {
                return Err(Error::validation(format!(
                    "prediction index {} out of range for {} records",
                    p.index,
                    ms.len()
                )));
            }
            if by_index.insert(p.index, *p).is_some() {
                return Err(Error::validation(format!("duplicate prediction index {}", p.index)));
            }
        }
        let missing: Vec<usize> = (0..ms.len()).filter(|i| !by_index.contains_key(i)).collect();
        if !missing.is_empty() {
            return Err(Error::validation(format!("missing indices: {missing:?}")));
        }
        let shifts = by_index
            .values()
            .map(|p| {
                if !(p.kx.is_finite() && p.ky.is_finite()) {
                    return Err(Error::validation(format!(
                        "prediction for record {} is not finite",
                        p.index
                    )));
                }
                let k = WaveVector::new(p.kx.round() as i64, p.ky.round() as i64);
                if k.kx.abs() > bound || k.ky.abs() > bound {
                    return Err(Error::validation(format!(
                        "prediction for record {} ({}, {}) exceeds the on-grid bound {bound}",
                        p.index, p.kx, p.ky
                    )));
                }
                Ok(k)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KSpaceEstimate::new(shifts, Provenance::External))
    }
}

pub fn load_predictions(path: &Path, ms: &MeasurementSet) -> Result<KSpaceEstimate> {
    let file: PredictionFile = read_json(path)?;
    file.to_estimate(ms)
}

pub fn save_predictions(path: &Path, est: &KSpaceEstimate, source: &str) -> Result<()> {
    write_json(path, &PredictionFile::from_estimate(est, source))
}
