use isafp::init::{coarse_misfit_init, ground_truth_init, load_predictions, pupil_support_init};
use isafp::sim::MeasurementSet;
use isafp::solver::{initialize_object, reconstruct, save_result, SolverParams};
use isafp::KSpaceEstimate;

use super::open_dataset;
use crate::error::{CliError, CliResult};
use crate::units::InitChoice;
use crate::ReconstructArgs;

/// Record with the most image energy; it holds the spectrum center.
fn brightest_record(ms: &MeasurementSet) -> usize {
    let energy = |i: usize| ms.records[i].image_intensity.iter().map(|&v| f64::from(v)).sum::<f64>();
    (0..ms.len())
        .max_by(|&a, &b| energy(a).total_cmp(&energy(b)).then(b.cmp(&a)))
        .unwrap_or(0)
}

fn initial_estimate(ms: &MeasurementSet, a: &ReconstructArgs) -> CliResult<KSpaceEstimate> {
    Ok(match &a.init {
        InitChoice::GroundTruth => ground_truth_init(ms)?,
        InitChoice::PupilSupport => pupil_support_init(ms)?,
        InitChoice::Coarse => {
            let seed = initialize_object(ms, brightest_record(ms))?;
            let limit = u32::try_from(ms.mask()?.max_shift().max(0)).unwrap_or(u32::MAX);
            coarse_misfit_init(ms, &seed, a.coarse_stride, a.coarse_bound.unwrap_or(limit))?
        }
        InitChoice::File(path) => {
            if !path.is_file() {
                return Err(CliError::Io(format!("prediction file {} not found", path.display())));
            }
            load_predictions(path, ms)?
        }
    })
}

pub fn run(a: &ReconstructArgs) -> CliResult<()> {
    let params = SolverParams {
        iterations: a.iters,
        beta: a.beta,
        gamma: a.gamma,
        delta_max: a.dmax,
        delta_min: a.dmin,
        search_every: a.search_every,
        epsilon: a.epsilon,
        use_pupil_constraint: a.pupil_constraint,
        step_rule: a.step_rule.into(),
    };
    params.validate()?;
    let ms = open_dataset(&a.dataset)?;
    let init = initial_estimate(&ms, a)?;
    let res = reconstruct(&ms, &init, &params)?;
    save_result(&res, &a.out)?;

    let moved = res
        .initial_k
        .shifts
        .iter()
        .zip(&res.corrected_k.shifts)
        .filter(|(a, b)| a != b)
        .count();
    if let Some(last) = res.loss_trace.last() {
        println!("data loss      {:.6e}", last.data);
        println!("tv loss        {:.6e}", last.tv);
        println!("phase loss     {:.6e}", last.phase);
    }
    println!("init           {}", res.initial_k.provenance);
    println!("k corrected    {moved}/{}", res.corrected_k.len());
    println!("wrote {}", a.out.display());
    Ok(())
}
