use isafp::metrics::{
    amplitude_rmse, k_rmse, overlap_fraction, phase_rmse_offset_corrected,
    phase_rmse_offset_corrected_masked,
};
use isafp::{Domain, KSpaceEstimate, Provenance, WaveVector};
use proptest::prelude::*;

mod common;

fn estimate(v: &[(i64, i64)]) -> KSpaceEstimate {
    KSpaceEstimate::new(
        v.iter().map(|&(x, y)| WaveVector::new(x, y)).collect(),
        Provenance::External,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_metric_ignores_global_phase(seed in any::<u64>(), phi in -20.0f64..20.0) {
        let x = common::random_field(&mut common::rng(seed), 16, Domain::Spatial);
        let y = x.with_global_phase(phi);
        prop_assert!(phase_rmse_offset_corrected(&y, &x).unwrap() < 1e-12);
        prop_assert!(phase_rmse_offset_corrected_masked(&y, &x, 0.05).unwrap() < 1e-12);
    }

    #[test]
    fn amplitude_metric_ignores_global_phase(seed in any::<u64>(), a in -7.0f64..7.0, b in -7.0f64..7.0) {
        let mut rng = common::rng(seed);
        let x = common::random_field(&mut rng, 8, Domain::Spatial);
        let y = common::random_field(&mut rng, 8, Domain::Spatial);
        let base = amplitude_rmse(&x, &y).unwrap();
        let turned = amplitude_rmse(&x.with_global_phase(a), &y.with_global_phase(b)).unwrap();
        prop_assert!((base - turned).abs() < 1e-12);
    }

    #[test]
    fn k_rmse_is_a_symmetric_distance(v in prop::collection::vec((-50i64..50, -50i64..50, -50i64..50, -50i64..50), 1..30)) {
        let a = estimate(&v.iter().map(|t| (t.0, t.1)).collect::<Vec<_>>());
        let b = estimate(&v.iter().map(|t| (t.2, t.3)).collect::<Vec<_>>());
        prop_assert_eq!(k_rmse(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(k_rmse(&a, &b).unwrap(), k_rmse(&b, &a).unwrap());
    }

    #[test]
    fn overlap_decreases_with_distance(r in 0.5f64..50.0, d1 in 0.0f64..2.5, d2 in 0.0f64..2.5) {
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(overlap_fraction(lo * r, r) >= overlap_fraction(hi * r, r));
    }
}

#[test]
fn overlap_is_continuous_at_tangency() {
    for r in [1.0, 7.5, 16.0] {
        assert_eq!(overlap_fraction(2.0 * r, r), 0.0);
        assert!(overlap_fraction(2.0 * r * (1.0 - 1e-9), r) < 1e-9);
        assert_eq!(overlap_fraction(3.0 * r, r), 0.0);
        assert!((overlap_fraction(0.0, r) - 1.0).abs() < 1e-15);
    }
}
