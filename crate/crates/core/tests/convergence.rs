//! Resolution behaviour of the Frenet residual on curves whose curvatures
//! vary, where stencil truncation rather than rounding dominates.

use helixkit::curves::{generators, resample_by_arclength, CurveSpec};
use helixkit::frenet::{frenet_apparatus, frenet_residual, DEFAULT_EPS_DEGENERATE};

fn residual(spec: &CurveSpec, nodes: usize) -> f64 {
    let curve = resample_by_arclength(spec, nodes).unwrap();
    let app = frenet_apparatus(&spec.space, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
    frenet_residual(&spec.space, &curve, &app).unwrap()
}

#[test]
fn generic_curve_residual_drops_at_fourth_order() {
    let spec = generators::generic_3d(0.5, 0.2, 0.1).unwrap();
    let mut prev = residual(&spec, 200);
    for nodes in [400, 800, 1600] {
        let r = residual(&spec, nodes);
        assert!(prev >= 8.0 * r, "{nodes}: {prev:e} -> {r:e}");
        prev = r;
    }
}

#[test]
fn perturbed_helix_residual_drops_at_fourth_order() {
    let base = generators::circular_helix(3.0, 4.0).unwrap();
    let spec = generators::perturbed(&base, 0.05).unwrap();
    let mut prev = residual(&spec, 250);
    for nodes in [500, 1000, 2000, 4000] {
        let r = residual(&spec, nodes);
        assert!(prev >= 8.0 * r, "{nodes}: {prev:e} -> {r:e}");
        prev = r;
    }
}
