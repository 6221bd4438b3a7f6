use num_complex::Complex64;

use isafp::io::write_dir_atomically;
use isafp::sim::io::load_truth;
use isafp::solver::load_result;
use isafp::{ComplexField, WaveVector};

use super::open_dataset;
use crate::error::{CliError, CliResult};
use crate::render::{amplitude_image, kspace_image, phase_image, png_bytes};
use crate::PlotArgs;

/// Circular mean of `arg(recovered) - arg(truth)`.
fn phase_offset(recovered: &ComplexField, truth: &ComplexField) -> f64 {
    let unit = |v: Complex64| if v.norm() > 0.0 { v / v.norm() } else { Complex64::new(0.0, 0.0) };
    recovered
        .data()
        .iter()
        .zip(truth.data().iter())
        .map(|(&r, &t)| unit(r) * unit(t).conj())
        .sum::<Complex64>()
        .arg()
}

pub fn run(a: &PlotArgs) -> CliResult<()> {
    let res = load_result(&a.result)?;
    let mut truth_k: Option<Vec<WaveVector>> = None;
    let mut offset = 0.0;
    if let (Some(dir), false) = (&a.dataset, a.no_truth) {
        let ms = open_dataset(dir)?;
        if ms.grid_size() != res.object.size() {
            return Err(CliError::validation(format!(
                "dataset grid {} does not match result grid {}",
                ms.grid_size(),
                res.object.size()
            )));
        }
        truth_k = ms.true_k().map(|k| k.shifts);
        if let Some(t) = load_truth(dir, ms.grid_size())? {
            offset = phase_offset(&res.object, &t);
        }
    }
    let amp = res.amplitude();
    let files = [
        ("amplitude.png", png_bytes(amplitude_image(&amp))?),
        ("phase.png", png_bytes(phase_image(&amp, &res.phase(), offset))?),
        (
            "kspace.png",
            png_bytes(kspace_image(&res.initial_k.shifts, &res.corrected_k.shifts, truth_k.as_deref()))?,
        ),
    ];
    write_dir_atomically(&a.out, |tmp| {
        for (name, bytes) in &files {
            let path = tmp.join(name);
            std::fs::write(&path, bytes).map_err(|source| isafp::Error::Io { path, source })?;
        }
        Ok(())
    })?;
    println!("wrote {}", a.out.display());
    Ok(())
}
