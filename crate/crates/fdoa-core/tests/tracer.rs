use fdoa_core::tracer::{
    emit_csv, equal_velocity_alpha, load_csv, trace, Branch, RealModel, TraceConfig,
};
use proptest::prelude::*;

fn cfg() -> TraceConfig {
    TraceConfig {
        grid: (128, 128),
        ..TraceConfig::default()
    }
}

#[test]
fn csv_round_trip() {
    let s = equal_velocity_alpha(0.5).unwrap();
    let r = trace(&s, &cfg()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    emit_csv(&r.branches, &path).unwrap();
    let back = load_csv(&path).unwrap();
    for b in Branch::ALL {
        assert_eq!(
            back[b as usize].polylines,
            r.branch(b).polylines,
            "{}",
            b.label()
        );
    }
}

#[test]
fn traced_vertices_lie_on_their_branch() {
    let s = equal_velocity_alpha(0.75).unwrap();
    let m = RealModel::new(&s).unwrap();
    let r = trace(&s, &cfg()).unwrap();
    for b in Branch::ALL {
        let tb = r.branch(b);
        assert!(!tb.is_empty());
        for &y in tb.vertices() {
            assert!(m.g_hat(b, y).abs() <= 1e-9, "{} at {y:?}", b.label());
        }
    }
}

#[test]
fn reflection_swaps_app_and_amm_in_the_trace() {
    let s = equal_velocity_alpha(0.5).unwrap();
    let m = RealModel::new(&s).unwrap();
    let r = trace(&s, &cfg()).unwrap();
    for &(y1, y2) in r.branch(Branch::App).vertices() {
        assert!(m.g_hat(Branch::Amm, (-y1, y2)).abs() <= 1e-9);
    }
}

proptest! {
    #[test]
    fn reflection_symmetry(alpha in 0.05f64..3.0, y1 in -3.0f64..3.0, y2 in -3.0f64..3.0) {
        let m = RealModel::new(&equal_velocity_alpha(alpha).unwrap()).unwrap();
        let r = (-y1, y2);
        let tol = 1e-12 * (1.0 + m.g_scale((y1, y2)));
        prop_assert!((m.g(Branch::App, (y1, y2)) - m.g(Branch::Amm, r)).abs() <= tol);
        prop_assert!((m.g(Branch::Amm, (y1, y2)) - m.g(Branch::App, r)).abs() <= tol);
        prop_assert!((m.g(Branch::Amp, (y1, y2)) - m.g(Branch::Amp, r)).abs() <= tol);
        prop_assert!((m.g(Branch::Apm, (y1, y2)) - m.g(Branch::Apm, r)).abs() <= tol);
    }

    #[test]
    fn trace_config_validation(n in 0usize..40, tol in -1.0f64..1.0) {
        let c = TraceConfig { grid: (n, n), zero_tol: tol, ..TraceConfig::default() };
        prop_assert_eq!(c.validate().is_ok(), n >= 16 && tol > 0.0);
    }
}
