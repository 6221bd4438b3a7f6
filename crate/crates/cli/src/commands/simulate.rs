use std::path::Path;

use isafp::io::{raster_side_from_len, read_f32_raster, write_dir_atomically};
use isafp::metrics::{overlap_fraction, radius_for_overlap};
use isafp::optics::{pixel_shift_to_rotation, rotation_to_pixel_shift, PixelShift};
use isafp::presets::{SPACE_THETA_MAX_DEG, WAVELENGTH_532NM};
use isafp::raster::{to_f64, RealRaster};
use isafp::sim::io::{write_dataset_files, write_truth_files};
use isafp::sim::scene::{render, SceneKind};
use isafp::sim::{build_complex_target, generate_rotation_grid, synthesize_dataset, NoiseConfig, TargetSpec};
use isafp::{OpticalConfig, RotationAngle};
use ndarray::Array2;

use crate::error::{CliError, CliResult};
use crate::units::positive;
use crate::{SceneArg, SimulateArgs};

/// Gray levels in [0, 1] from an 8-bit PNG (any color type is converted to luma)
/// or a raw square `.f32` raster.
pub(crate) fn load_gray(path: &Path) -> CliResult<RealRaster> {
    if !path.exists() {
        return Err(CliError::Io(format!("cannot read {}: file not found", path.display())));
    }
    let is_raw = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("f32"));
    if is_raw {
        let n = raster_side_from_len(path)?;
        return Ok(to_f64(&read_f32_raster(path, n)?));
    }
    let img = image::open(path)?.to_luma8();
    let (w, h) = img.dimensions();
    if w != h {
        return Err(CliError::validation(format!(
            "{} is {w}×{h}; targets must be square",
            path.display()
        )));
    }
    let n = w as usize;
    Ok(Array2::from_shape_vec((n, n), img.into_raw())
        .expect("luma buffer is n×n")
        .mapv(|v| f64::from(v) / 255.0))
}

fn optical_config(a: &SimulateArgs) -> CliResult<(OpticalConfig, f64)> {
    let wavelength = positive(a.wavelength, "wavelength")?;
    let pitch = match a.pixel_pitch {
        Some(p) => positive(p, "pixel pitch")?,
        None => positive(a.target_width, "target width")? / a.n as f64,
    };
    // Radius 1 is a placeholder while the shift scale is worked out.
    let probe = OpticalConfig::new(wavelength, a.n, pitch, 1.0)?;
    let theta_max = match (a.kmax, a.theta_max) {
        (Some(k), _) => {
            if !(k.is_finite() && k >= 0.0) {
                return Err(CliError::validation(format!("kmax must be nonnegative, got {k}")));
            }
            pixel_shift_to_rotation(PixelShift { kx: k, ky: 0.0 }, &probe).theta_x
        }
        (None, Some(t)) => t,
        (None, None) if wavelength == WAVELENGTH_532NM => SPACE_THETA_MAX_DEG.to_radians(),
        (None, None) => {
            return Err(CliError::validation("give --theta-max or --kmax for a custom wavelength"))
        }
    };
    Ok((probe, theta_max))
}

pub fn run(a: &SimulateArgs) -> CliResult<()> {
    let (probe, theta_max) = optical_config(a)?;
    let (nx, ny) = a.grid;
    let grid = generate_rotation_grid(nx, ny, theta_max)?;
    let spacing = grid
        .spacing()
        .map(|s| rotation_to_pixel_shift(RotationAngle { theta_x: s, theta_y: 0.0 }, &probe).kx);
    let radius = match (a.radius, spacing) {
        (Some(r), _) => r,
        (None, Some(d)) => radius_for_overlap(d, a.overlap)?,
        (None, None) => {
            return Err(CliError::validation("a single-angle grid needs an explicit --radius"))
        }
    };
    let config = OpticalConfig::new(probe.wavelength, a.n, probe.pixel_pitch, radius)?;

    let amplitude = match (&a.target, a.scene) {
        (Some(p), _) => load_gray(p)?,
        (None, Some(SceneArg::Satellite)) => render(SceneKind::Satellite, a.n, a.seed),
        (None, Some(SceneArg::Texture)) => render(SceneKind::Texture, a.n, a.seed),
        (None, None) => return Err(CliError::validation("give --target or --scene")),
    };
    let phase_source = match &a.phase {
        Some(p) => load_gray(p)?,
        None => amplitude.clone(),
    };
    if !(a.phase_max.is_finite() && a.phase_max >= 0.0) {
        return Err(CliError::validation(format!("phase-max must be nonnegative, got {}", a.phase_max)));
    }
    let spec = TargetSpec { amplitude_source: amplitude, phase_source, phase_max: a.phase_max };
    let target = build_complex_target(&spec, a.n)?;
    let noise = NoiseConfig { spec: a.noise, seed: a.seed };
    let ms = synthesize_dataset(&target, &grid, &config, &noise)?;

    write_dir_atomically(&a.out, |tmp| {
        write_dataset_files(&ms, tmp)?;
        write_truth_files(&target, tmp)
    })?;

    let kmax = ms
        .records
        .iter()
        .filter_map(|r| r.true_k)
        .map(|k| (k.norm_sqr() as f64).sqrt())
        .fold(0.0, f64::max);
    println!("records        {}", ms.len());
    println!("max |true_k|   {kmax:.3} px");
    println!("radius         {radius:.4} px");
    match spacing {
        Some(d) => println!("overlap        {:.4}", overlap_fraction(d, radius)),
        None => println!("overlap        n/a"),
    }
    println!("wrote {}", a.out.display());
    Ok(())
}
