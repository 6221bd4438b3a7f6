use isafp::init::*;
use isafp::optics::{fft_centered, pixel_shift_to_rotation, PixelShift};
use isafp::raster::to_f64;
use isafp::sim::{generate_rotation_grid, synthesize_dataset, NoiseConfig};
use isafp::solver::local_k_search;
use isafp::{ComplexField, Domain, KSpaceEstimate, Provenance, WaveVector};
use ndarray::Array2;
use num_complex::Complex64;

mod common;

#[test]
fn ground_truth_requires_synthetic_set() {
    let (_, ms) = common::small_set(1, NoiseConfig::default());
    let k = ground_truth_init(&ms).unwrap();
    assert_eq!(k.provenance, Provenance::GroundTruth);
    assert_eq!(k.len(), ms.len());
    assert!(ground_truth_init(&ms.without_ground_truth()).is_err());
}

#[test]
fn point_object_is_localized_exactly() {
    let cfg = common::small_config();
    let theta = pixel_shift_to_rotation(PixelShift { kx: 20.0, ky: 0.0 }, &cfg).theta_x;
    let grid = generate_rotation_grid(7, 7, theta).unwrap();
    let mut o = Array2::<Complex64>::zeros((64, 64));
    o[[32, 32]] = Complex64::new(1.0, 0.0);
    let target = ComplexField::new(o, Domain::Spatial).unwrap();
    let ms = synthesize_dataset(&target, &grid, &cfg, &NoiseConfig::default()).unwrap();
    let est = pupil_support_init(&ms).unwrap();
    assert_eq!(est.provenance, Provenance::Classical);
    assert_eq!(est.shifts, ms.true_k().unwrap().shifts);
}

#[test]
fn empty_pupil_falls_back_to_zero() {
    let (_, mut ms) = common::small_set(2, NoiseConfig::default());
    ms.records[4].pupil_intensity.fill(0.0);
    let est = pupil_support_init(&ms).unwrap();
    assert_eq!(est.shifts[4], WaveVector::ZERO);
    assert_eq!(est.fallback_records, vec![4]);
}

#[test]
fn pupil_localizer_ignores_intensity_scale() {
    let (_, ms) = common::small_set(3, NoiseConfig::default());
    let base = pupil_support_init(&ms).unwrap();
    for c in [1e-3f32, 7.3, 1e4] {
        let mut scaled = ms.clone();
        for r in &mut scaled.records {
            r.pupil_intensity.mapv_inplace(|v| v * c);
        }
        assert_eq!(pupil_support_init(&scaled).unwrap().shifts, base.shifts);
    }
}

#[test]
fn coarse_stride_one_matches_local_search() {
    let (_, ms) = common::small_set(4, NoiseConfig::default());
    let seed = isafp::solver::initialize_object(&ms, 12).unwrap();
    let mask = ms.mask().unwrap();
    let bound = 7;
    let coarse = coarse_misfit_init(&ms, &seed, 1, bound).unwrap();
    for (rec, got) in ms.records.iter().zip(&coarse.shifts) {
        let i = to_f64(&rec.image_intensity);
        let want = local_k_search(&seed, &mask, &i, WaveVector::ZERO, bound).unwrap();
        assert_eq!(*got, want);
    }
}

#[test]
fn coarse_search_with_true_spectrum_is_exact() {
    let (target, ms) = common::small_set(5, NoiseConfig::default());
    let spec = fft_centered(&target).unwrap();
    let bound = ms.mask().unwrap().max_shift() as u32;
    let est = coarse_misfit_init(&ms, &spec, 1, bound).unwrap();
    assert_eq!(est.shifts, ms.true_k().unwrap().shifts);
}

#[test]
fn coarse_search_edge_cases() {
    let (target, ms) = common::small_set(6, NoiseConfig::default());
    let spec = fft_centered(&target).unwrap();
    let est = coarse_misfit_init(&ms, &spec, 9, 4).unwrap();
    assert!(est.shifts.iter().all(|k| *k == WaveVector::ZERO));
    assert!(coarse_misfit_init(&ms, &spec, 0, 4).is_err());
    assert!(coarse_misfit_init(&ms, &spec, 1, 1000).is_err());
}

fn write(dir: &std::path::Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("pred.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn prediction_files() {
    let (_, ms) = common::small_set(7, NoiseConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let n = ms.len();

    let zeros: Vec<String> = (0..n).map(|i| format!(r#"{{"index": {i}, "kx": 0.0, "ky": 0.0}}"#)).collect();
    let p = write(dir.path(), &format!(r#"{{"source": "t", "predictions": [{}]}}"#, zeros.join(",")));
    let est = load_predictions(&p, &ms).unwrap();
    assert_eq!(est.provenance, Provenance::External);
    assert!(est.shifts.iter().all(|k| *k == WaveVector::ZERO));

    let truth = ms.true_k().unwrap();
    let p = dir.path().join("rt.json");
    save_predictions(&p, &truth, "truth").unwrap();
    let back = load_predictions(&p, &ms).unwrap();
    assert_eq!(back.shifts, truth.shifts);

    let mut shuffled: Vec<String> = (0..n)
        .rev()
        .map(|i| format!(r#"{{"index": {i}, "kx": 2.5, "ky": -2.5}}"#))
        .collect();
    let p = write(dir.path(), &format!(r#"{{"source": "t", "predictions": [{}]}}"#, shuffled.join(",")));
    let est = load_predictions(&p, &ms).unwrap();
    assert!(est.shifts.iter().all(|k| *k == WaveVector::new(3, -3)));

    shuffled.remove(n - 1 - 3);
    let p = write(dir.path(), &format!(r#"{{"source": "t", "predictions": [{}]}}"#, shuffled.join(",")));
    let err = load_predictions(&p, &ms).unwrap_err();
    assert!(err.is_validation());
    assert!(err.to_string().contains("missing indices: [3]"), "{err}");

    let mut far = zeros.clone();
    far[2] = r#"{"index": 2, "kx": 400.0, "ky": 0.0}"#.to_string();
    let p = write(dir.path(), &format!(r#"{{"source": "t", "predictions": [{}]}}"#, far.join(",")));
    let err = load_predictions(&p, &ms).unwrap_err();
    assert!(err.to_string().contains("record 2"), "{err}");

    let p = write(dir.path(), "[1, 2");
    assert!(!load_predictions(&p, &ms).unwrap_err().is_validation());
}

#[test]
fn five_record_gap_is_reported() {
    let (_, mut ms) = common::small_set(8, NoiseConfig::default());
    ms.records.truncate(5);
    let est = KSpaceEstimate::new(vec![WaveVector::ZERO; 5], Provenance::External);
    let mut file = PredictionFile::from_estimate(&est, "x");
    file.predictions.remove(3);
    let err = file.to_estimate(&ms).unwrap_err();
    assert!(err.to_string().ends_with("missing indices: [3]"), "{err}");
}
