#![allow(dead_code)]

use isafp::optics::{pixel_shift_to_rotation, OpticalConfig, PixelShift};
use isafp::sim::scene::{render, SceneKind};
use isafp::sim::{
    build_complex_target, generate_rotation_grid, synthesize_dataset, MeasurementSet, NoiseConfig,
    TargetSpec,
};
use isafp::{ComplexField, Domain};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_field(rng: &mut ChaCha8Rng, n: usize, domain: Domain) -> ComplexField {
    let data = Array2::from_shape_fn((n, n), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    ComplexField::new(data, domain).unwrap()
}

pub fn small_config() -> OpticalConfig {
    OpticalConfig::new(500e-9, 64, 20e-6, 6.0).unwrap()
}

/// 5×5 grid on a 64² texture with neighbors 6 px apart (about 40% overlap).
pub fn small_set(seed: u64, noise: NoiseConfig) -> (ComplexField, MeasurementSet) {
    let cfg = small_config();
    let theta = pixel_shift_to_rotation(PixelShift { kx: 12.0, ky: 0.0 }, &cfg).theta_x;
    let grid = generate_rotation_grid(5, 5, theta).unwrap();
    let img = render(SceneKind::Texture, 64, seed);
    let target = build_complex_target(&TargetSpec::from_intensity(img), 64).unwrap();
    let ms = synthesize_dataset(&target, &grid, &cfg, &noise).unwrap();
    (target, ms)
}
