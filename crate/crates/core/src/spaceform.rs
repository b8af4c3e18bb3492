//! Ambient spaces of constant curvature: Euclidean space and round spheres
//! embedded as hypersurfaces of the next Euclidean space.
//!
//! The Levi-Civita connection of a sphere is the ambient derivative followed
//! by orthogonal projection onto the tangent space, so both spaces share one
//! code path and the Euclidean case simply skips the projection.

use std::fmt;
use std::str::FromStr;

use crate::curves::UnitSpeedCurve;
use crate::error::{Error, Result};
use crate::numkit::{diff_field, integrate_ode_with, interp_vectors, Grid, VecN, MAX_DIM, MIN_DIM};

/// Relative tolerance on `|‖p‖ - r|` before a point counts as off the sphere.
pub const MANIFOLD_TOL: f64 = 1e-6;
/// Relative normal component allowed in a transport seed.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceForm {
    Euclidean { dim: usize },
    Sphere { dim: usize, radius: f64 },
}

impl SpaceForm {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        Ok(SpaceForm::Euclidean { dim })
    }

    pub fn sphere(dim: usize, radius: f64) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::DimensionOutOfRange(dim));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidSpaceForm(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(SpaceForm::Sphere { dim, radius })
    }

    /// Dimension of the manifold itself.
    pub fn intrinsic_dim(&self) -> usize {
        match *self {
            SpaceForm::Euclidean { dim } | SpaceForm::Sphere { dim, .. } => dim,
        }
    }

    /// Number of coordinates of a point.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            SpaceForm::Euclidean { dim } => dim,
            SpaceForm::Sphere { dim, .. } => dim + 1,
        }
    }

    pub fn sectional_curvature(&self) -> f64 {
        match *self {
            SpaceForm::Euclidean { .. } => 0.0,
            SpaceForm::Sphere { radius, .. } => 1.0 / (radius * radius),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, SpaceForm::Euclidean { .. })
    }

    /// Relative distance of `point` from the manifold (0 for Euclidean space).
    pub fn manifold_deviation(&self, point: &VecN) -> f64 {
        match *self {
            SpaceForm::Euclidean { .. } => 0.0,
            SpaceForm::Sphere { radius, .. } => (point.norm() - radius).abs() / radius,
        }
    }

    pub fn check_point(&self, point: &VecN) -> Result<()> {
        if point.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: point.dim() });
        }
        let deviation = self.manifold_deviation(point);
        if deviation > MANIFOLD_TOL {
            return Err(Error::OffManifold { deviation });
        }
        Ok(())
    }

    /// Outward unit normal of the sphere at `point`; `None` in Euclidean space.
    pub fn unit_normal(&self, point: &VecN) -> Option<VecN> {
        match *self {
            SpaceForm::Euclidean { .. } => None,
            SpaceForm::Sphere { .. } => point.normalized(),
        }
    }

    /// Projection without the manifold check, for internal hot loops.
    pub(crate) fn project_unchecked(&self, point: &VecN, vector: VecN) -> VecN {
        match *self {
            SpaceForm::Euclidean { .. } => vector,
            SpaceForm::Sphere { .. } => {
                let mut out = vector;
                let c = out.dot(point) / point.norm_sq();
                out.axpy(-c, point);
                out
            }
        }
    }
}

impl fmt::Display for SpaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceForm::Euclidean { dim } => write!(f, "euclidean:{dim}"),
            SpaceForm::Sphere { dim, radius } => write!(f, "sphere:{dim}:{radius}"),
        }
    }
}

impl FromStr for SpaceForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpaceForm(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let dim = |p: &str| p.parse::<usize>().map_err(|_| bad());
        let space = match parts.as_slice() {
            ["euclidean", n] => SpaceForm::euclidean(dim(n)?),
            ["sphere", n, r] => SpaceForm::sphere(dim(n)?, r.parse::<f64>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }?;
        if space.ambient_dim() > MAX_DIM {
            return Err(Error::DimensionOutOfRange(space.ambient_dim()));
        }
        Ok(space)
    }
}

/// Vectors attached to the nodes of a curve's grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    pub grid: Grid,
    pub vectors: Vec<VecN>,
}

impl TangentField {
    pub fn new(grid: Grid, vectors: Vec<VecN>) -> Result<Self> {
        if vectors.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(TangentField { grid, vectors })
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(VecN::norm).collect()
    }
}

/// Tangential part of `vector` at `point`.
pub fn tangent_project(space: &SpaceForm, point: &VecN, vector: &VecN) -> Result<VecN> {
    space.check_point(point)?;
    if vector.dim() != point.dim() {
        return Err(Error::DimensionMismatch { expected: point.dim(), found: vector.dim() });
    }
    Ok(space.project_unchecked(point, vector.clone()))
}

/// `∇_{v₁} Y` along the curve: stencil derivative of the ambient
/// coordinates, then tangential projection at each node.
pub fn covariant_derivative(space: &SpaceForm, curve: &UnitSpeedCurve, field: &TangentField) -> Result<TangentField> {
    if !field.grid.matches(&curve.grid) || field.vectors.len() != curve.points.len() {
        return Err(Error::GridMismatch);
    }
    let raw = diff_field(&field.vectors, curve.grid.step())?;
    Ok(TangentField { grid: curve.grid, vectors: project_along(space, &curve.points, raw) })
}

pub(crate) fn project_along(space: &SpaceForm, points: &[VecN], vectors: Vec<VecN>) -> Vec<VecN> {
    if space.is_euclidean() {
        return vectors;
    }
    vectors
        .into_iter()
        .zip(points)
        .map(|(v, p)| space.project_unchecked(p, v))
        .collect()
}

/// Parallel transport of `x0` from the first node of the curve.
pub fn parallel_transport(space: &SpaceForm, curve: &UnitSpeedCurve, x0: &VecN) -> Result<TangentField> {
    parallel_transport_from(space, curve, 0, x0)
}

/// Parallel transport of `x0` given at node `seed` to every node of the curve.
///
/// On the sphere a field with `∇_{v₁}X = 0` satisfies
/// `X' = -(⟨X, α'⟩ / r²) α`; it is integrated forward and backward from the
/// seed with RK4, re-projected and renormalized to `‖x0‖` after every step.
pub fn parallel_transport_from(
    space: &SpaceForm,
    curve: &UnitSpeedCurve,
    seed: usize,
    x0: &VecN,
) -> Result<TangentField> {
    let n = curve.points.len();
    if seed >= n {
        return Err(Error::BadParams(format!("seed node {seed} outside curve of {n} nodes")));
    }
    let anchor = &curve.points[seed];
    space.check_point(anchor)?;
    if x0.dim() != anchor.dim() {
        return Err(Error::DimensionMismatch { expected: anchor.dim(), found: x0.dim() });
    }
    let SpaceForm::Sphere { radius, .. } = *space else {
        return TangentField::new(curve.grid, vec![x0.clone(); n]);
    };

    let x_norm = x0.norm();
    let deviation = x0.dot(anchor).abs() / (radius * x_norm.max(f64::MIN_POSITIVE));
    if deviation > TANGENCY_TOL {
        return Err(Error::NonTangentSeed { deviation });
    }
    let r2 = radius * radius;
    let grid = curve.grid;
    let tangents = diff_field(&curve.points, grid.step())?;
    let points = &curve.points;

    let mut out = vec![x0.clone(); n];
    let restore = |node: usize, y: &mut [f64]| {
        let p = &points[node];
        let c = y.iter().zip(p.as_slice()).map(|(a, b)| a * b).sum::<f64>() / p.norm_sq();
        for (yj, pj) in y.iter_mut().zip(p.as_slice()) {
            *yj -= c * pj;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for yj in y.iter_mut() {
                *yj *= x_norm / norm;
            }
        }
    };

    // Forward: s increases from the seed.
    if seed + 1 < n {
        let seg = Grid::segment(grid.node(seed), grid.step(), n - seed)?;
        let field = |s: f64, y: &[f64]| {
            let p = interp_vectors(points, &grid, s);
            let t = interp_vectors(&tangents, &grid, s);
            let c = -dot_slice(y, t.as_slice()) / r2;
            p.as_slice().iter().map(|pj| c * pj).collect()
        };
        let traj = integrate_ode_with(field, x0.as_slice(), &seg, |k, y| restore(seed + k, y))?;
        for (k, y) in traj.into_iter().enumerate().skip(1) {
            out[seed + k] = VecN::new(y)?;
        }
    }
    // Backward: integrate in u = -s so the step stays positive.
    if seed > 0 {
        let seg = Grid::segment(-grid.node(seed), grid.step(), seed + 1)?;
        let field = |u: f64, y: &[f64]| {
            let p = interp_vectors(points, &grid, -u);
            let t = interp_vectors(&tangents, &grid, -u);
            let c = dot_slice(y, t.as_slice()) / r2;
            p.as_slice().iter().map(|pj| c * pj).collect()
        };
        let traj = integrate_ode_with(field, x0.as_slice(), &seg, |k, y| restore(seed - k, y))?;
        for (k, y) in traj.into_iter().enumerate().skip(1) {
            out[seed - k] = VecN::new(y)?;
        }
    }
    TangentField::new(grid, out)
}

fn dot_slice(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
