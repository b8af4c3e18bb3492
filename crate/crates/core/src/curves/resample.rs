use super::{check_sample_count, CurveKind, CurveSpec, DerivativeSource, Evaluator, UnitSpeedCurve, MIN_CURVE_NODES};
use crate::error::{Error, Result};
use crate::numkit::{cumulative_quadrature, diff_field, interp_vectors, Grid, MonotoneCubic, VecN};
use crate::spaceform::SpaceForm;

/// Speeds below this mark a stationary point.
const MIN_SPEED: f64 = 1e-10;
const DENSE_FACTOR: usize = 16;
const MIN_DENSE_NODES: usize = 4096;
const NEWTON_STEPS: usize = 4;

// Five-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Reparametrize a curve by arclength on `node_count` uniform nodes.
///
/// The speed is differentiated with the five-point stencil on a dense
/// parameter grid and accumulated by quadrature; the arclength map is
/// inverted with a monotone cubic. Analytic curves then polish each
/// parameter with Newton steps on the arclength integral.
pub fn resample_by_arclength(spec: &CurveSpec, node_count: usize) -> Result<UnitSpeedCurve> {
    if node_count < MIN_CURVE_NODES {
        return Err(Error::TooFewSamples { needed: MIN_CURVE_NODES, found: node_count });
    }
    match &spec.kind {
        CurveKind::Analytic { evaluator, t_range } => resample_analytic(&spec.space, evaluator, *t_range, node_count),
        CurveKind::Sampled { points, params } => resample_sampled(&spec.space, points, params, node_count),
    }
}

struct ArclengthTable {
    params: Grid,
    lengths: Vec<f64>,
}

impl ArclengthTable {
    fn build(points: &[VecN], params: Grid) -> Result<Self> {
        let tangents = diff_field(points, params.step())?;
        let speeds: Vec<f64> = tangents.iter().map(VecN::norm).collect();
        if let Some(i) = speeds.iter().position(|v| *v < MIN_SPEED) {
            return Err(Error::DegenerateCurve { t: params.node(i) });
        }
        let lengths = cumulative_quadrature(&speeds, params.step())?;
        if lengths.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotoneLength);
        }
        Ok(ArclengthTable { params, lengths })
    }

    fn total(&self) -> f64 {
        *self.lengths.last().expect("non-empty table")
    }

    /// Parameters at uniformly spaced arclengths, by monotone cubic inversion.
    fn invert(&self, node_count: usize) -> (Grid, Vec<f64>) {
        let inverse = MonotoneCubic::new(self.lengths.clone(), self.params.nodes().collect());
        let total = self.total();
        let grid = Grid::spanning(0.0, total, node_count).expect("positive length");
        let mut ts: Vec<f64> = grid.nodes().map(|s| inverse.eval(s)).collect();
        ts[0] = self.params.start();
        ts[node_count - 1] = self.params.end();
        (grid, ts)
    }
}

fn resample_analytic(
    space: &SpaceForm,
    evaluator: &Evaluator,
    (t0, t1): (f64, f64),
    node_count: usize,
) -> Result<UnitSpeedCurve> {
    let dense = (node_count * DENSE_FACTOR).max(MIN_DENSE_NODES);
    let params = Grid::spanning(t0, t1, dense)?;
    let points: Vec<VecN> = params.nodes().map(|t| evaluator(t)).collect();
    check_points(space, &points)?;
    let table = ArclengthTable::build(&points, params)?;
    let (grid, mut ts) = table.invert(node_count);

    let speed = |t: f64| point_speed(evaluator, t, params.step(), (t0, t1));
    let length_at = |t: f64| -> f64 {
        let j = (((t - t0) / params.step()).floor().max(0.0) as usize).min(dense - 1);
        let a = params.node(j);
        let half = 0.5 * (t - a);
        let mid = 0.5 * (t + a);
        let integral: f64 = GL_NODES
            .iter()
            .zip(GL_WEIGHTS)
            .map(|(x, w)| w * speed(mid + half * x))
            .sum();
        table.lengths[j] + half * integral
    };
    for (i, t) in ts.iter_mut().enumerate().take(node_count - 1).skip(1) {
        let target = grid.node(i);
        for _ in 0..NEWTON_STEPS {
            let delta = (length_at(*t) - target) / speed(*t);
            *t = (*t - delta).clamp(t0, t1);
            if delta.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
    }

    let points: Vec<VecN> = ts.iter().map(|&t| evaluator(t)).collect();
    check_points(space, &points)?;
    Ok(UnitSpeedCurve { grid, points, derivative_source: DerivativeSource::AnalyticStencil })
}

fn resample_sampled(space: &SpaceForm, samples: &[VecN], params: &[f64], node_count: usize) -> Result<UnitSpeedCurve> {
    check_sample_count(space, node_count)?;
    let n = params.len();
    let param_grid = Grid::spanning(params[0], params[n - 1], n)?;
    let uniform = params
        .iter()
        .enumerate()
        .all(|(i, p)| (p - param_grid.node(i)).abs() <= 1e-9 * param_grid.step().max(p.abs() * 1e-3));
    if !uniform {
        return Err(Error::BadParams("sample parameters must be uniformly spaced".into()));
    }
    let table = ArclengthTable::build(samples, param_grid)?;
    let (grid, ts) = table.invert(node_count);
    let radius = match *space {
        SpaceForm::Sphere { radius, .. } => Some(radius),
        SpaceForm::Euclidean { .. } => None,
    };
    let points = ts
        .iter()
        .map(|&t| {
            let p = interp_vectors(samples, &param_grid, t);
            match radius {
                Some(r) => p.scaled(r / p.norm()),
                None => p,
            }
        })
        .collect::<Vec<_>>();
    check_points(space, &points)?;
    Ok(UnitSpeedCurve { grid, points, derivative_source: DerivativeSource::SampleStencil })
}

fn check_points(space: &SpaceForm, points: &[VecN]) -> Result<()> {
    for p in points {
        if !p.is_finite() {
            return Err(Error::NonFinite("curve evaluation"));
        }
        space.check_point(p)?;
    }
    Ok(())
}

/// Speed at an arbitrary parameter from the five-point stencil with step `h`,
/// switching to one-sided stencils within two steps of the range ends.
fn point_speed(evaluator: &Evaluator, t: f64, h: f64, (t0, t1): (f64, f64)) -> f64 {
    let f = |k: f64| evaluator(t + k * h);
    let d = if t - 2.0 * h < t0 {
        let (a, b, c, d, e) = (f(0.0), f(1.0), f(2.0), f(3.0), f(4.0));
        combine(&[(-25.0, &a), (48.0, &b), (-36.0, &c), (16.0, &d), (-3.0, &e)])
    } else if t + 2.0 * h > t1 {
        let (a, b, c, d, e) = (f(0.0), f(-1.0), f(-2.0), f(-3.0), f(-4.0));
        combine(&[(25.0, &a), (-48.0, &b), (36.0, &c), (-16.0, &d), (3.0, &e)])
    } else {
        let (a, b, c, d) = (f(-2.0), f(-1.0), f(1.0), f(2.0));
        combine(&[(1.0, &a), (-8.0, &b), (8.0, &c), (-1.0, &d)])
    };
    d.norm() / (12.0 * h)
}

fn combine(terms: &[(f64, &VecN)]) -> VecN {
    let mut out = VecN::zeros(terms[0].1.dim());
    for (w, v) in terms {
        out.axpy(*w, v);
    }
    out
}
