use std::path::Path;

use log::{debug, info};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gradients::{
    phase_gradient_spatial, phase_loss_spatial, tv_gradient_spatial, tv_loss_spatial,
    DataTermAccumulator,
};
use super::kernel::{ProjectionKernel, TransposedImage, Workspace};
use super::params::{SolverParams, StepRule};
use super::projection::{
    default_init_record, image_f64, initialize_object, local_pupil_values, modulus_replaced,
};
use super::search::{annealed_radius, prepare_intensity, MisfitEvaluator, PreparedIntensity};
use super::step::step_size_alpha;
use crate::error::{Error, Result};
use crate::io::{read_f32_raster, read_json, write_dir_atomically, write_f32_raster, write_json};
use crate::kspace::{KSpaceEstimate, Provenance};
use crate::optics::{CenteredFft, ComplexField, Domain, PupilMask, WaveVector};
use crate::raster::{to_f32, RealRaster};
use crate::sim::MeasurementSet;

pub const RESULT_FILE: &str = "result.json";
const FORMAT_VERSION: u32 = 1;

/// Objective terms evaluated at the start of one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossRecord {
    pub data: f64,
    pub tv: f64,
    pub phase: f64,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub spectrum: ComplexField,
    pub object: ComplexField,
    pub initial_k: KSpaceEstimate,
    pub corrected_k: KSpaceEstimate,
    pub loss_trace: Vec<LossRecord>,
    pub params: SolverParams,
}

impl ReconstructionResult {
    pub fn amplitude(&self) -> RealRaster {
        self.object.amplitude()
    }

    pub fn phase(&self) -> RealRaster {
        self.object.phase()
    }
}

/// Runs the solver starting from the spectrum of the record nearest zero shift.
pub fn reconstruct(
    ms: &MeasurementSet,
    init_k: &KSpaceEstimate,
    params: &SolverParams,
) -> Result<ReconstructionResult> {
    let idx = default_init_record(init_k)
        .ok_or_else(|| Error::validation("k-space estimate is empty"))?;
    let start = initialize_object(ms, idx)?;
    reconstruct_with(ms, &ms.mask()?, init_k, start, params)
}

/// Runs the solver from a given spectrum with an explicit pupil mask.
pub fn reconstruct_with(
    ms: &MeasurementSet,
    mask: &PupilMask,
    init_k: &KSpaceEstimate,
    initial_spectrum: ComplexField,
    params: &SolverParams,
) -> Result<ReconstructionResult> {
    params.validate()?;
    ms.validate()?;
    if ms.is_empty() {
        return Err(Error::validation("measurement set has no records"));
    }
    initial_spectrum.expect_domain(Domain::Frequency, "initial spectrum")?;
    let n = ms.grid_size();
    if initial_spectrum.size() != n {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            actual: initial_spectrum.data().dim(),
        });
    }
    if mask.grid_size() != n {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            actual: mask.raster().dim(),
        });
    }
    init_k.validate(ms.len(), mask.max_shift())?;

    let solver = Solver::new(ms, mask, params);
    let mut k_hat = init_k.shifts.clone();
    let mut spectrum = initial_spectrum.into_data();
    let mut trace = Vec::with_capacity(params.iterations);
    let mut prepared: Option<Vec<PreparedIntensity>> = None;
    let mut alpha = solver.alpha(&k_hat)?;

    for t in 0..params.iterations {
        let (next, losses) = solver.sweep(&spectrum, &k_hat, &alpha);
        spectrum = next;
        trace.push(losses);
        debug!(
            "sweep {t}: data {:.6e} tv {:.6e} phase {:.6e}",
            losses.data, losses.tv, losses.phase
        );

        if params.search_enabled() && (t + 1) % params.search_every == 0 {
            let radius = annealed_radius(t, params.iterations, params.delta_max, params.delta_min);
            if radius > 0 {
                let cache = prepared.get_or_insert_with(|| solver.prepare_all());
                let updated = solver.search(&spectrum, &k_hat, cache, radius);
                let moved = updated.iter().zip(&k_hat).filter(|(a, b)| a != b).count();
                info!("sweep {t}: k-search radius {radius} moved {moved} estimates");
                if moved > 0 {
                    k_hat = updated;
                    alpha = solver.alpha(&k_hat)?;
                }
            }
        }
    }

    let spectrum = ComplexField::from_parts(spectrum, Domain::Frequency);
    let object = ComplexField::from_parts(solver.plan.inverse(spectrum.data()), Domain::Spatial);
    let mut corrected_k = KSpaceEstimate::new(k_hat, Provenance::Corrected);
    corrected_k.fallback_records = init_k.fallback_records.clone();
    Ok(ReconstructionResult {
        spectrum,
        object,
        initial_k: init_k.clone(),
        corrected_k,
        loss_trace: trace,
        params: *params,
    })
}

struct Solver<'a> {
    mask: &'a PupilMask,
    params: &'a SolverParams,
    plan: std::sync::Arc<CenteredFft>,
    images: Vec<RealRaster>,
    transposed: Vec<TransposedImage>,
    kernel: ProjectionKernel<'a>,
    pupils: Option<Vec<&'a Array2<f32>>>,
}

impl<'a> Solver<'a> {
    fn new(ms: &'a MeasurementSet, mask: &'a PupilMask, params: &'a SolverParams) -> Self {
        let images = image_f64(ms);
        Self {
            mask,
            params,
            plan: CenteredFft::shared(ms.grid_size()),
            transposed: images.iter().map(TransposedImage::new).collect(),
            kernel: ProjectionKernel::new(ms.grid_size(), mask),
            images,
            pupils: params
                .use_pupil_constraint
                .then(|| ms.records.iter().map(|r| &r.pupil_intensity).collect()),
        }
    }

    fn alpha(&self, k_hat: &[WaveVector]) -> Result<RealRaster> {
        let mut alpha = step_size_alpha(self.mask, k_hat)?;
        if self.params.step_rule == StepRule::NormalizedCoverage {
            let peak = alpha.iter().fold(0.0f64, |a, &v| a.max(v));
            if peak > 0.0 {
                alpha /= peak;
            }
        }
        Ok(alpha)
    }

    /// Constrained pupil-plane values on the mask support plus the record's
    /// data misfit before the constraint.
    fn project(
        &self,
        ws: &mut Workspace,
        spectrum: &Array2<Complex64>,
        j: usize,
        k: WaveVector,
    ) -> (Vec<Complex64>, f64) {
        let eps = self.params.epsilon;
        let (mut values, misfit) = self.kernel.project(ws, spectrum, k, &self.transposed[j], eps);
        if let Some(pupils) = &self.pupils {
            let target = local_pupil_values(pupils[j], self.mask, k);
            for (v, t) in values.iter_mut().zip(target) {
                *v = modulus_replaced(*v, t, eps);
            }
        }
        (values, misfit)
    }

    fn sweep(
        &self,
        spectrum: &Array2<Complex64>,
        k_hat: &[WaveVector],
        alpha: &RealRaster,
    ) -> (Array2<Complex64>, LossRecord) {
        let p = self.params;
        let projected: Vec<(Vec<Complex64>, f64)> = k_hat
            .par_iter()
            .enumerate()
            .map_init(
                || Workspace::new(self.plan.size()),
                |ws, (j, &k)| self.project(ws, spectrum, j, k),
            )
            .collect();
        let mut acc = DataTermAccumulator::new(spectrum.nrows());
        let mut data_loss = 0.0;
        for ((values, misfit), &k) in projected.iter().zip(k_hat) {
            acc.add_support_values(spectrum, self.mask, k, values);
            data_loss += misfit;
        }
        let data = acc.finish(p.epsilon);

        let object = self.plan.inverse(spectrum);
        let losses = LossRecord {
            data: data_loss,
            tv: tv_loss_spatial(&object, p.epsilon),
            phase: phase_loss_spatial(&object),
        };
        let mut reg = Array2::<Complex64>::zeros(spectrum.dim());
        if p.beta > 0.0 {
            reg.scaled_add(Complex64::new(p.beta, 0.0), &tv_gradient_spatial(&object, p.epsilon));
        }
        if p.gamma > 0.0 {
            reg.scaled_add(
                Complex64::new(p.gamma, 0.0),
                &phase_gradient_spatial(&object, p.epsilon),
            );
        }
        if p.beta > 0.0 || p.gamma > 0.0 {
            self.plan.forward_in_place(&mut reg);
        }

        let mut next = spectrum.clone();
        ndarray::Zip::from(&mut next)
            .and(&data)
            .and(&reg)
            .and(alpha)
            .for_each(|o, &d, &r, &a| *o -= d * a + r);
        (next, losses)
    }

    fn prepare_all(&self) -> Vec<PreparedIntensity> {
        let m = super::search::reduced_grid_size(self.plan.size(), self.mask.reach());
        self.images.par_iter().map(|i| prepare_intensity(i, m)).collect()
    }

    fn search(
        &self,
        spectrum: &Array2<Complex64>,
        k_hat: &[WaveVector],
        prepared: &[PreparedIntensity],
        radius: u32,
    ) -> Vec<WaveVector> {
        let eval = MisfitEvaluator::from_array(spectrum, self.mask);
        k_hat
            .par_iter()
            .zip(prepared.par_iter())
            .map(|(&k, prep)| eval.search(prep, k, radius).0)
            .collect()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ResultManifest {
    format_version: u32,
    grid_size: usize,
    params: SolverParams,
    initial_k: KSpaceEstimate,
    corrected_k: KSpaceEstimate,
    loss_trace: Vec<LossRecord>,
}

/// Writes `result.json` plus raw amplitude, phase and spectrum rasters,
/// replacing `dir` atomically.
pub fn save_result(result: &ReconstructionResult, dir: &Path) -> Result<()> {
    write_dir_atomically(dir, |tmp| {
        let manifest = ResultManifest {
            format_version: FORMAT_VERSION,
            grid_size: result.spectrum.size(),
            params: result.params,
            initial_k: result.initial_k.clone(),
            corrected_k: result.corrected_k.clone(),
            loss_trace: result.loss_trace.clone(),
        };
        write_json(&tmp.join(RESULT_FILE), &manifest)?;
        write_f32_raster(&tmp.join("amplitude.f32"), &to_f32(&result.amplitude()))?;
        write_f32_raster(&tmp.join("phase.f32"), &to_f32(&result.phase()))?;
        let s = result.spectrum.data();
        write_f32_raster(&tmp.join("spectrum_re.f32"), &s.mapv(|v| v.re as f32))?;
        write_f32_raster(&tmp.join("spectrum_im.f32"), &s.mapv(|v| v.im as f32))?;
        Ok(())
    })
}

/// Reads a result directory. The object is rebuilt from the stored amplitude
/// and phase, the spectrum from its stored parts.
pub fn load_result(dir: &Path) -> Result<ReconstructionResult> {
    let path = dir.join(RESULT_FILE);
    let m: ResultManifest = read_json(&path)?;
    if m.format_version != FORMAT_VERSION {
        return Err(Error::format(
            &path,
            format!("unsupported format version {}", m.format_version),
        ));
    }
    let n = m.grid_size;
    let read = |name: &str| read_f32_raster(&dir.join(name), n);
    let (amp, phase) = (read("amplitude.f32")?, read("phase.f32")?);
    let (re, im) = (read("spectrum_re.f32")?, read("spectrum_im.f32")?);
    let object = Array2::from_shape_fn((n, n), |ix| {
        Complex64::from_polar(f64::from(amp[ix]), f64::from(phase[ix]))
    });
    let spectrum =
        Array2::from_shape_fn((n, n), |ix| Complex64::new(f64::from(re[ix]), f64::from(im[ix])));
    Ok(ReconstructionResult {
        spectrum: ComplexField::new(spectrum, Domain::Frequency)?,
        object: ComplexField::new(object, Domain::Spatial)?,
        initial_k: m.initial_k,
        corrected_k: m.corrected_k,
        loss_trace: m.loss_trace,
        params: m.params,
    })
}
