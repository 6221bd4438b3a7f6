use isafp::init::{ground_truth_init, pupil_support_init};
use isafp::presets::SpaceScene;
use isafp::sim::scene::{render, SceneKind};
use isafp::sim::{build_complex_target, synthesize_dataset, NoiseConfig, TargetSpec};

fn mean_error(kind: SceneKind, seeds: std::ops::RangeInclusive<u64>) -> f64 {
    let scene = SpaceScene::new().unwrap();
    let n = scene.config.grid_size;
    let mut per_scene = Vec::new();
    for seed in seeds {
        let target = build_complex_target(&TargetSpec::from_intensity(render(kind, n, seed)), n).unwrap();
        let ms = synthesize_dataset(&target, &scene.grid, &scene.config, &NoiseConfig::default()).unwrap();
        let truth = ground_truth_init(&ms).unwrap();
        let est = pupil_support_init(&ms).unwrap();
        let sum: f64 = truth
            .shifts
            .iter()
            .zip(&est.shifts)
            .map(|(a, b)| (((a.kx - b.kx).pow(2) + (a.ky - b.ky).pow(2)) as f64).sqrt())
            .sum();
        per_scene.push(sum / truth.len() as f64);
    }
    per_scene.iter().sum::<f64>() / per_scene.len() as f64
}

#[test]
fn pupil_support_localizes_satellite_scenes() {
    let e = mean_error(SceneKind::Satellite, 1..=20);
    assert!(e <= 6.0, "mean localization error {e:.3} px");
}

// measured 6.05 px over these seeds
#[test]
fn pupil_support_localizes_texture_scenes() {
    let e = mean_error(SceneKind::Texture, 1..=20);
    assert!(e <= 6.5, "mean localization error {e:.3} px");
}
