//! Curve descriptions, arclength reparametrization and curve files.

mod file;
pub mod generators;
mod resample;

use std::fmt;
use std::sync::Arc;

pub use file::{CurveFile, ParamKind};
pub use generators::{generate, GeneratorKind, ParamMap};
pub use resample::resample_by_arclength;

use crate::error::{Error, Result};
use crate::numkit::{diff_field, Grid, VecN};
use crate::spaceform::SpaceForm;

/// Minimum node count of a reparametrized curve.
pub const MIN_CURVE_NODES: usize = 64;
/// Sampled input in intrinsic dimension four or more needs this many nodes.
pub const MIN_SAMPLES_HIGH_DIM: usize = 512;
/// Allowed deviation of `‖dα/ds‖` from one.
pub const SPEED_TOL: f64 = 1e-6;
/// Acceptance threshold for samples declared to be arclength-spaced. The
/// stencil speed of coarse but exact arclength samples deviates from one by
/// its truncation error, so loaded files get a looser check.
pub const LOADED_SPEED_TOL: f64 = 1e-4;

pub type Evaluator = Arc<dyn Fn(f64) -> VecN + Send + Sync>;

#[derive(Clone)]
pub enum CurveKind {
    Analytic { evaluator: Evaluator, t_range: (f64, f64) },
    Sampled { points: Vec<VecN>, params: Vec<f64> },
}

impl fmt::Debug for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Analytic { t_range, .. } => f.debug_struct("Analytic").field("t_range", t_range).finish(),
            CurveKind::Sampled { points, .. } => f.debug_struct("Sampled").field("nodes", &points.len()).finish(),
        }
    }
}

/// A curve in a space form, either as a parametrization or as samples.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub space: SpaceForm,
}

impl CurveSpec {
    pub fn analytic<F>(space: SpaceForm, t_range: (f64, f64), evaluator: F) -> Result<Self>
    where
        F: Fn(f64) -> VecN + Send + Sync + 'static,
    {
        let (t0, t1) = t_range;
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::BadParams(format!("parameter range [{t0}, {t1}] is empty or not finite")));
        }
        let probe = evaluator(t0);
        if probe.dim() != space.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: space.ambient_dim(), found: probe.dim() });
        }
        Ok(CurveSpec { kind: CurveKind::Analytic { evaluator: Arc::new(evaluator), t_range }, space })
    }

    pub fn sampled(space: SpaceForm, points: Vec<VecN>, params: Vec<f64>) -> Result<Self> {
        if points.len() != params.len() {
            return Err(Error::BadParams(format!(
                "{} samples but {} parameter values",
                points.len(),
                params.len()
            )));
        }
        check_sample_count(&space, points.len())?;
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams("sample parameters must be strictly increasing".into()));
        }
        for p in &points {
            space.check_point(p)?;
        }
        Ok(CurveSpec { kind: CurveKind::Sampled { points, params }, space })
    }

    /// Evaluate an analytic curve; `None` for sampled curves.
    pub fn eval(&self, t: f64) -> Option<VecN> {
        match &self.kind {
            CurveKind::Analytic { evaluator, .. } => Some(evaluator(t)),
            CurveKind::Sampled { .. } => None,
        }
    }
}

pub(crate) fn check_sample_count(space: &SpaceForm, count: usize) -> Result<()> {
    let needed = if space.intrinsic_dim() >= 4 { MIN_SAMPLES_HIGH_DIM } else { MIN_CURVE_NODES };
    if count < needed {
        return Err(Error::TooFewSamples { needed, found: count });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    AnalyticStencil,
    SampleStencil,
}

/// Curve sampled on a uniform arclength grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSpeedCurve {
    pub grid: Grid,
    pub points: Vec<VecN>,
    pub derivative_source: DerivativeSource,
}

impl UnitSpeedCurve {
    /// Wraps samples that are already spaced by arclength, checking the
    /// manifold constraint and the unit-speed invariant.
    pub fn from_arclength_samples(space: &SpaceForm, grid: Grid, points: Vec<VecN>) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        check_sample_count(space, points.len())?;
        for p in &points {
            space.check_point(p)?;
        }
        let curve = UnitSpeedCurve { grid, points, derivative_source: DerivativeSource::SampleStencil };
        let dev = curve.speed_deviation()?;
        if dev > LOADED_SPEED_TOL {
            return Err(Error::BadParams(format!(
                "samples are not spaced by arclength (speed deviates from 1 by {dev:.3e})"
            )));
        }
        Ok(curve)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.grid.length()
    }

    /// Ambient derivative `dα/ds` at every node.
    pub fn tangents(&self) -> Result<Vec<VecN>> {
        diff_field(&self.points, self.grid.step())
    }

    /// `max |‖dα/ds‖ - 1|` over all nodes.
    pub fn speed_deviation(&self) -> Result<f64> {
        Ok(self.tangents()?.iter().map(|t| (t.norm() - 1.0).abs()).fold(0.0, f64::max))
    }
}
