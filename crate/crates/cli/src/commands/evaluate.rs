use isafp::metrics::{
    amplitude_rmse, k_rmse, overlap_fraction, per_record_k_error, phase_rmse_offset_corrected,
    phase_rmse_offset_corrected_masked, EvalReport, PHASE_SUPPORT_THRESHOLD,
};
use isafp::sim::io::load_truth;
use isafp::solver::load_result;
use isafp::{ComplexField, KSpaceEstimate};

use super::{aperture_spacing, open_dataset, write_file_atomically};
use crate::error::{CliError, CliResult};
use crate::EvaluateArgs;

struct Truth {
    object: ComplexField,
    k: KSpaceEstimate,
    overlap: Option<f64>,
}

fn truth_from_args(a: &EvaluateArgs) -> CliResult<Truth> {
    if let Some(dir) = &a.truth_result {
        let t = load_result(dir)?;
        return Ok(Truth { object: t.object, k: t.corrected_k, overlap: None });
    }
    let dir = a.dataset.as_ref().expect("clap requires --dataset or --truth-result");
    let ms = open_dataset(dir)?;
    let k = ms
        .true_k()
        .ok_or_else(|| CliError::validation(format!("dataset {} has no ground-truth shifts", dir.display())))?;
    let object = load_truth(dir, ms.grid_size())?
        .ok_or_else(|| CliError::validation(format!("dataset {} has no ground-truth object", dir.display())))?;
    let overlap = aperture_spacing(&ms).map(|d| overlap_fraction(d, ms.config.aperture_radius));
    Ok(Truth { object, k, overlap })
}

pub fn run(a: &EvaluateArgs) -> CliResult<()> {
    let res = load_result(&a.result)?;
    let truth = truth_from_args(a)?;
    let report = EvalReport {
        amplitude_rmse: amplitude_rmse(&res.object, &truth.object)?,
        phase_rmse: phase_rmse_offset_corrected(&res.object, &truth.object)?,
        phase_rmse_masked: phase_rmse_offset_corrected_masked(
            &res.object,
            &truth.object,
            PHASE_SUPPORT_THRESHOLD,
        )?,
        k_rmse: k_rmse(&res.corrected_k, &truth.k)?,
        per_record_k_error: per_record_k_error(&res.corrected_k, &truth.k)?,
        overlap_fraction: truth.overlap,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    print!("{}", report.table());
    match &a.out {
        Some(path) => {
            write_file_atomically(path, json.as_bytes())?;
            println!("wrote {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}
