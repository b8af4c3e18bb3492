//! Frenet frames and curvatures with respect to the space form's connection.

use std::ops::Range;

use serde::Serialize;

use crate::curves::UnitSpeedCurve;
use crate::error::{Error, Result};
use crate::json::to_json_string;
use crate::numkit::{complete_orientation, determinant, diff_field, gram_schmidt, Grid, VecN};
use crate::spaceform::{project_along, SpaceForm};

pub const DEFAULT_EPS_DEGENERATE: f64 = 1e-7;
/// Largest fraction of interior nodes that may be masked as degenerate.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.01;
const MAX_INTRINSIC_DIM: usize = 16;

/// Nodes excluded at each end of the grid when measuring residuals and
/// spreads; one-sided stencils compound through the derivative chain there.
pub fn interior_margin(dim: usize, len: usize) -> usize {
    (2 * (dim + 3)).min(len / 4)
}

pub fn interior(dim: usize, len: usize) -> Range<usize> {
    let m = interior_margin(dim, len);
    m..len - m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeStatus {
    /// Rank of the covariant derivative chain at the node.
    pub rank: usize,
    /// Curvatures (and, if rank-deficient, the frame) were interpolated.
    pub masked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrenetApparatus {
    pub grid: Grid,
    /// `frames[node][i]` is `v_{i+1}`.
    pub frames: Vec<Vec<VecN>>,
    /// `curvatures[node][i]` is `k_{i+1}`.
    pub curvatures: Vec<Vec<f64>>,
    pub degeneracy: Vec<NodeStatus>,
}

impl FrenetApparatus {
    /// Intrinsic dimension `n`.
    pub fn dim(&self) -> usize {
        self.frames[0].len()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn interior(&self) -> Range<usize> {
        interior(self.dim(), self.len())
    }

    /// `v_i` along the curve, 1-based.
    pub fn frame(&self, i: usize) -> Vec<VecN> {
        self.frames.iter().map(|f| f[i - 1].clone()).collect()
    }

    /// `k_i` along the curve, 1-based; `k_0 = k_n = 0`.
    pub fn curvature(&self, i: usize) -> Vec<f64> {
        if i == 0 || i >= self.dim() {
            return vec![0.0; self.len()];
        }
        self.curvatures.iter().map(|k| k[i - 1]).collect()
    }

    pub fn masked_count(&self) -> usize {
        self.degeneracy.iter().filter(|d| d.masked).count()
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct Export<'a> {
            s: Vec<f64>,
            frames: Vec<Vec<&'a [f64]>>,
            curvatures: &'a [Vec<f64>],
            degeneracy: &'a [NodeStatus],
        }
        to_json_string(&Export {
            s: self.grid.nodes().collect(),
            frames: self.frames.iter().map(|f| f.iter().map(VecN::as_slice).collect()).collect(),
            curvatures: &self.curvatures,
            degeneracy: &self.degeneracy,
        })
    }
}

/// Frenet apparatus of a unit-speed curve.
///
/// The chain `α', ∇α', ∇²α', …` is built with the stencil plus tangential
/// projection and orthonormalized per node; `v_n` completes the frame with
/// positive orientation (on the sphere, `det[N, v₁, …, v_n] = +1`).
pub fn frenet_apparatus(space: &SpaceForm, curve: &UnitSpeedCurve, eps_degenerate: f64) -> Result<FrenetApparatus> {
    if !(eps_degenerate > 0.0) {
        return Err(Error::BadParams(format!("eps_degenerate must be positive, got {eps_degenerate}")));
    }
    let n = space.intrinsic_dim();
    if n > MAX_INTRINSIC_DIM {
        return Err(Error::DimensionTooHigh(n));
    }
    let ambient = space.ambient_dim();
    if let Some(p) = curve.points.iter().find(|p| p.dim() != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, found: p.dim() });
    }
    let len = curve.len();
    let h = curve.grid.step();

    let mut chain = vec![project_along(space, &curve.points, diff_field(&curve.points, h)?)];
    for _ in 1..n - 1 {
        let next = project_along(space, &curve.points, diff_field(chain.last().expect("non-empty"), h)?);
        chain.push(next);
    }

    let mut frames = Vec::with_capacity(len);
    let mut ranks = Vec::with_capacity(len);
    for node in 0..len {
        let ws: Vec<VecN> = chain.iter().map(|c| c[node].clone()).collect();
        let (basis, rank) = gram_schmidt(&ws, f64::MIN_POSITIVE).unwrap_or((Vec::new(), 0));
        ranks.push(rank);
        if rank == n - 1 {
            frames.push(complete_frame(space, &curve.points[node], basis));
        } else {
            frames.push(Vec::new());
        }
    }

    // Rank-deficient frames are rebuilt from their neighbours before the
    // frame fields are differentiated.
    let bad: Vec<bool> = ranks.iter().map(|&r| r < n - 1).collect();
    let range = interior(n, len);
    let interior_bad = range.clone().filter(|&i| bad[i]).count();
    if bad.iter().all(|&b| b) || interior_bad as f64 > MAX_DEGENERATE_FRACTION * range.len() as f64 {
        let index = range.clone().filter(|&i| bad[i]).map(|i| ranks[i].max(1)).min().unwrap_or(1);
        return Err(Error::DegenerateCurvature {
            index,
            fraction: 100.0 * interior_bad as f64 / range.len() as f64,
        });
    }
    for node in 0..len {
        if bad[node] {
            let (l, r, w) = neighbours(&bad, node);
            let mixed: Vec<VecN> = (0..n - 1)
                .map(|i| {
                    let mut v = frames[l][i].scaled(1.0 - w);
                    v.axpy(w, &frames[r][i]);
                    space.project_unchecked(&curve.points[node], v)
                })
                .collect();
            let (basis, rank) = gram_schmidt(&mixed, f64::MIN_POSITIVE)?;
            frames[node] = if rank == n - 1 {
                complete_frame(space, &curve.points[node], basis)
            } else {
                frames[l].clone()
            };
        }
    }

    let derivs = frame_derivatives(space, curve, &frames)?;
    let mut curvatures: Vec<Vec<f64>> = (0..len)
        .map(|node| (0..n - 1).map(|i| derivs[i][node].dot(&frames[node][i + 1])).collect())
        .collect();

    // With n = 2 the only curvature is also the last one; it is still
    // required to be non-zero so that geodesics count as degenerate.
    let checked = (n - 2).max(1);
    let mut below = vec![0usize; checked];
    let mut masked = bad.clone();
    for node in 0..len {
        for i in 0..checked {
            if !(curvatures[node][i] >= eps_degenerate) {
                masked[node] = true;
                if range.contains(&node) && !bad[node] {
                    below[i] += 1;
                }
            }
        }
    }
    let interior_bad = range.clone().filter(|&i| masked[i]).count();
    let fraction = interior_bad as f64 / range.len() as f64;
    if fraction > MAX_DEGENERATE_FRACTION || masked.iter().all(|&m| m) {
        let (worst, _) = below.iter().enumerate().max_by_key(|(_, c)| **c).expect("checked >= 1");
        return Err(Error::DegenerateCurvature { index: worst + 1, fraction: 100.0 * fraction });
    }
    mask_curvatures(&mut curvatures, &masked);

    let degeneracy = ranks.into_iter().zip(masked).map(|(rank, masked)| NodeStatus { rank, masked }).collect();
    Ok(FrenetApparatus { grid: curve.grid, frames, curvatures, degeneracy })
}

fn complete_frame(space: &SpaceForm, point: &VecN, mut basis: Vec<VecN>) -> Vec<VecN> {
    let last = match space.unit_normal(point) {
        Some(normal) => {
            let mut rows = Vec::with_capacity(basis.len() + 1);
            rows.push(normal);
            rows.extend(basis.iter().cloned());
            complete_orientation(&rows)
        }
        None => complete_orientation(&basis),
    };
    basis.push(last);
    basis
}

/// Nearest unflagged nodes on each side and the blend weight toward the right.
fn neighbours(flags: &[bool], node: usize) -> (usize, usize, f64) {
    let left = (0..node).rev().find(|&j| !flags[j]);
    let right = (node + 1..flags.len()).find(|&j| !flags[j]);
    match (left, right) {
        (Some(l), Some(r)) => (l, r, (node - l) as f64 / (r - l) as f64),
        (Some(l), None) => (l, l, 0.0),
        (None, Some(r)) => (r, r, 0.0),
        (None, None) => unreachable!("at least one node is unflagged"),
    }
}

fn mask_curvatures(curvatures: &mut [Vec<f64>], masked: &[bool]) {
    for node in 0..curvatures.len() {
        if masked[node] {
            let (l, r, w) = neighbours(masked, node);
            let ks: Vec<f64> = curvatures[l]
                .iter()
                .zip(&curvatures[r])
                .map(|(a, b)| (1.0 - w) * a + w * b)
                .collect();
            curvatures[node] = ks;
        }
    }
}

/// `∇_{v₁} v_i` along the curve for every frame index (0-based outer index).
fn frame_derivatives(space: &SpaceForm, curve: &UnitSpeedCurve, frames: &[Vec<VecN>]) -> Result<Vec<Vec<VecN>>> {
    let n = frames[0].len();
    (0..n)
        .map(|i| {
            let field: Vec<VecN> = frames.iter().map(|f| f[i].clone()).collect();
            Ok(project_along(space, &curve.points, diff_field(&field, curve.grid.step())?))
        })
        .collect()
}

/// Max over interior nodes and `i` of `‖∇v_i + k_{i-1}v_{i-1} − k_i v_{i+1}‖`,
/// divided by `1 + max |k_j|`.
pub fn frenet_residual(space: &SpaceForm, curve: &UnitSpeedCurve, app: &FrenetApparatus) -> Result<f64> {
    if app.len() != curve.len() || !app.grid.matches(&curve.grid) {
        return Err(Error::GridMismatch);
    }
    let n = app.dim();
    let derivs = frame_derivatives(space, curve, &app.frames)?;
    let scale = 1.0 + app.curvatures.iter().flatten().fold(0.0f64, |m, k| m.max(k.abs()));
    let mut worst = 0.0f64;
    for node in app.interior() {
        let frame = &app.frames[node];
        let k = |i: usize| if i == 0 || i >= n { 0.0 } else { app.curvatures[node][i - 1] };
        for i in 1..=n {
            let mut r = derivs[i - 1][node].clone();
            if i > 1 {
                r.axpy(k(i - 1), &frame[i - 2]);
            }
            if i < n {
                r.axpy(-k(i), &frame[i]);
            }
            worst = worst.max(r.norm());
        }
    }
    Ok(worst / scale)
}

/// `det[v₁, …, v_n]` in Euclidean space, `det[N, v₁, …, v_n]` on the sphere.
pub fn orientation(space: &SpaceForm, point: &VecN, frame: &[VecN]) -> f64 {
    match space.unit_normal(point) {
        Some(normal) => {
            let mut rows = vec![normal];
            rows.extend(frame.iter().cloned());
            determinant(&rows)
        }
        None => determinant(frame),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{generators, resample_by_arclength, CurveSpec};
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn helix(nodes: usize) -> (SpaceForm, UnitSpeedCurve) {
        let spec = generators::circular_helix(3.0, 4.0).unwrap();
        (spec.space, resample_by_arclength(&spec, nodes).unwrap())
    }

    #[test]
    fn helix_curvatures_and_normal() {
        let (space, curve) = helix(2000);
        let app = frenet_apparatus(&space, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
        assert_eq!(app.masked_count(), 0);
        for node in app.interior() {
            assert!((app.curvatures[node][0] - 0.12).abs() < 1e-8);
            assert!((app.curvatures[node][1] - 0.16).abs() < 1e-8);
            // v₂ = -(x, y, 0)/3 for the helix around the z axis.
            let p = &curve.points[node];
            let inward = VecN::from_slice(&[-p[0] / 3.0, -p[1] / 3.0, 0.0]).unwrap();
            assert!(app.frames[node][1].distance(&inward) < 1e-8);
        }
        assert!(frenet_residual(&space, &curve, &app).unwrap() < 1e-6);
    }

    #[test]
    fn frames_are_orthonormal_and_positively_oriented() {
        let spec = generators::clifford_s3(std::f64::consts::FRAC_PI_4, 1.0, 2.0).unwrap();
        let curve = resample_by_arclength(&spec, 2000).unwrap();
        let app = frenet_apparatus(&spec.space, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
        for (node, frame) in app.frames.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((frame[i].dot(&frame[j]) - expect).abs() < 1e-9);
                }
                assert!(frame[i].dot(&curve.points[node]).abs() < 1e-9);
            }
            assert!((orientation(&spec.space, &curve.points[node], frame) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn straight_line_is_degenerate() {
        let e = SpaceForm::euclidean(3).unwrap();
        let spec = CurveSpec::analytic(e, (0.0, 5.0), |t| VecN::from_slice(&[t, 2.0 * t, -t]).unwrap()).unwrap();
        let curve = resample_by_arclength(&spec, 256).unwrap();
        let err = frenet_apparatus(&e, &curve, DEFAULT_EPS_DEGENERATE).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurvature { index: 1, .. }), "{err:?}");
    }

    #[test]
    fn great_circle_is_degenerate() {
        let s = SpaceForm::sphere(2, 1.0).unwrap();
        let spec = CurveSpec::analytic(s, (0.0, TAU), |t| VecN::from_slice(&[t.cos(), t.sin(), 0.0]).unwrap()).unwrap();
        let curve = resample_by_arclength(&spec, 512).unwrap();
        let err = frenet_apparatus(&s, &curve, DEFAULT_EPS_DEGENERATE).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurvature { index: 1, .. }), "{err:?}");
    }

    #[test]
    fn small_circle_on_the_sphere_has_geodesic_curvature() {
        // Latitude circle at height z = 0.8 on S²(1): k = z / ρ = 0.8 / 0.6.
        let s = SpaceForm::sphere(2, 1.0).unwrap();
        let spec = CurveSpec::analytic(s, (0.0, TAU), |t| {
            VecN::from_slice(&[0.6 * t.cos(), 0.6 * t.sin(), 0.8]).unwrap()
        })
        .unwrap();
        let curve = resample_by_arclength(&spec, 1000).unwrap();
        let app = frenet_apparatus(&s, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
        for node in app.interior() {
            assert!((app.curvatures[node][0].abs() - 0.8 / 0.6).abs() < 1e-7);
        }
    }

    #[test]
    fn negated_frame_vector_is_detected() {
        let (space, curve) = helix(2000);
        let mut app = frenet_apparatus(&space, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
        for frame in &mut app.frames {
            frame[1] = -&frame[1];
        }
        let r = frenet_residual(&space, &curve, &app).unwrap();
        // The residual is normalized by 1 + max k.
        assert!(r * 1.16 >= 2.0 * 0.12, "{r}");
    }

    #[test]
    fn rejects_bad_eps() {
        let (space, curve) = helix(200);
        assert!(matches!(frenet_apparatus(&space, &curve, 0.0), Err(Error::BadParams(_))));
    }

    #[test]
    fn isolated_nodes_are_interpolated() {
        let mut ks = vec![vec![1.0, 2.0], vec![5.0, 5.0], vec![3.0, 4.0], vec![9.0, 9.0]];
        mask_curvatures(&mut ks, &[false, true, false, true]);
        assert_eq!(ks, vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 4.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn json_export_lists_nodes() {
        let (space, curve) = helix(100);
        let app = frenet_apparatus(&space, &curve, DEFAULT_EPS_DEGENERATE).unwrap();
        let v: serde_json::Value = serde_json::from_str(&app.to_json_string()).unwrap();
        assert_eq!(v["s"].as_array().unwrap().len(), 100);
        assert_eq!(v["frames"][0].as_array().unwrap().len(), 3);
        assert_eq!(v["curvatures"][0].as_array().unwrap().len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn generic_curves_give_orthonormal_oriented_frames(
            c1 in 0.2f64..1.0, c2 in 0.1f64..0.5, c3 in 0.05f64..0.3
        ) {
            let spec = generators::generic_3d(c1, c2, c3).unwrap();
            let curve = resample_by_arclength(&spec, 400).unwrap();
            if let Ok(app) = frenet_apparatus(&spec.space, &curve, DEFAULT_EPS_DEGENERATE) {
                for (node, frame) in app.frames.iter().enumerate() {
                    for i in 0..3 {
                        for j in 0..3 {
                            let expect = if i == j { 1.0 } else { 0.0 };
                            prop_assert!((frame[i].dot(&frame[j]) - expect).abs() < 1e-9);
                        }
                    }
                    prop_assert!((orientation(&spec.space, &curve.points[node], frame) - 1.0).abs() < 1e-9);
                    prop_assert!(app.curvatures[node][0] > 0.0);
                }
            }
        }
    }
}
