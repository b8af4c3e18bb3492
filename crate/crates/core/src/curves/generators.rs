//! Analytic test curves: helices with constant curvature ratios, their
//! perturbations, and generic curves for negative controls.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use super::{CurveKind, CurveSpec};
use crate::error::{Error, Result};
use crate::numkit::VecN;
use crate::spaceform::SpaceForm;

pub type ParamMap = BTreeMap<String, f64>;

/// Frequency of the perturbation term `ε·sin(7t)`.
pub const PERTURBATION_FREQUENCY: f64 = 7.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `(a cos t, a sin t, b t)` in E³.
    CircularHelix,
    /// `(a cos pt, a sin pt, b cos qt, b sin qt, c t)` in E⁵.
    WCurve5,
    /// `(cos θ cos pt, cos θ sin pt, sin θ cos qt, sin θ sin qt)` on S³(1).
    CliffordS3,
    /// `(t, c1 t², c2 t³ + c3 sin 2t)` in E³.
    Generic3d,
    /// A base curve plus `ε·sin(7t)` on its last ambient coordinate.
    Perturbed(Box<GeneratorKind>),
}

impl GeneratorKind {
    fn base_name(&self) -> &'static str {
        match self {
            GeneratorKind::CircularHelix => "circular-helix",
            GeneratorKind::WCurve5 => "w-curve-5",
            GeneratorKind::CliffordS3 => "clifford-s3",
            GeneratorKind::Generic3d => "generic-3d",
            GeneratorKind::Perturbed(base) => base.base_name(),
        }
    }

    fn param_names(&self) -> &'static [&'static str] {
        match self {
            GeneratorKind::CircularHelix => &["a", "b"],
            GeneratorKind::WCurve5 => &["a", "p", "b", "q", "c"],
            GeneratorKind::CliffordS3 => &["theta", "p", "q"],
            GeneratorKind::Generic3d => &["c1", "c2", "c3"],
            GeneratorKind::Perturbed(base) => base.param_names(),
        }
    }

    /// Default parameter interval.
    pub fn default_range(&self) -> (f64, f64) {
        match self {
            GeneratorKind::CircularHelix => (-TAU, TAU),
            GeneratorKind::WCurve5 => (-300.0, 300.0),
            GeneratorKind::CliffordS3 => (0.0, 4.0 * TAU),
            GeneratorKind::Generic3d => (-2.0, 2.0),
            GeneratorKind::Perturbed(base) => base.default_range(),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let GeneratorKind::Perturbed(base) = self {
            write!(f, "perturbed-{base}")
        } else {
            f.write_str(self.base_name())
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some(base) = normalized.strip_prefix("perturbed-") {
            let base: GeneratorKind = base.parse()?;
            if matches!(base, GeneratorKind::Perturbed(_)) {
                return Err(Error::BadParams("perturbations do not nest".into()));
            }
            return Ok(GeneratorKind::Perturbed(Box::new(base)));
        }
        match normalized.as_str() {
            "circular-helix" => Ok(GeneratorKind::CircularHelix),
            "w-curve-5" => Ok(GeneratorKind::WCurve5),
            "clifford-s3" => Ok(GeneratorKind::CliffordS3),
            "generic-3d" => Ok(GeneratorKind::Generic3d),
            _ => Err(Error::BadParams(format!(
                "unknown curve kind '{s}' (expected circular-helix, w-curve-5, clifford-s3, generic-3d or perturbed-<kind>)"
            ))),
        }
    }
}

/// Build a curve from a kind and a `name -> value` map.
///
/// Every kind accepts `t0`/`t1` to override the parameter range; perturbed
/// kinds additionally take `eps`. `c` of the W-curve defaults to the value
/// that makes it unit speed, and the generic curve's coefficients default to
/// `c1 = 0.5, c2 = 0.2, c3 = 0.1`.
pub fn generate(kind: &GeneratorKind, params: &ParamMap) -> Result<CurveSpec> {
    let mut allowed: Vec<&str> = kind.param_names().to_vec();
    allowed.extend(["t0", "t1"]);
    if matches!(kind, GeneratorKind::Perturbed(_)) {
        allowed.push("eps");
    }
    if let Some(unknown) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::BadParams(format!("unknown parameter '{unknown}' for {kind}")));
    }
    if let Some((k, v)) = params.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::BadParams(format!("parameter {k} = {v} is not finite")));
    }
    let get = |name: &str| -> Result<f64> {
        params
            .get(name)
            .copied()
            .ok_or_else(|| Error::BadParams(format!("missing parameter '{name}' for {kind}")))
    };
    let or = |name: &str, default: f64| params.get(name).copied().unwrap_or(default);

    let spec = match kind {
        GeneratorKind::CircularHelix => circular_helix(get("a")?, get("b")?)?,
        GeneratorKind::WCurve5 => {
            let (a, p, b, q) = (get("a")?, get("p")?, get("b")?, get("q")?);
            let c = match params.get("c") {
                Some(c) => *c,
                None => unit_speed_drift(a, p, b, q)?,
            };
            w_curve_5(a, p, b, q, c)?
        }
        GeneratorKind::CliffordS3 => clifford_s3(get("theta")?, get("p")?, get("q")?)?,
        GeneratorKind::Generic3d => generic_3d(or("c1", 0.5), or("c2", 0.2), or("c3", 0.1))?,
        GeneratorKind::Perturbed(base) => {
            let mut base_params = params.clone();
            base_params.remove("eps");
            base_params.remove("t0");
            base_params.remove("t1");
            perturbed(&generate(base, &base_params)?, get("eps")?)?
        }
    };
    let (d0, d1) = kind.default_range();
    with_range(&spec, or("t0", d0), or("t1", d1))
}

/// Translation speed `c` that makes the W-curve unit speed.
pub fn unit_speed_drift(a: f64, p: f64, b: f64, q: f64) -> Result<f64> {
    let rest = 1.0 - a * a * p * p - b * b * q * q;
    if rest <= 0.0 {
        return Err(Error::BadParams(format!(
            "a²p² + b²q² = {} leaves no room for a unit-speed drift c",
            1.0 - rest
        )));
    }
    Ok(rest.sqrt())
}

/// Same curve on a different parameter interval.
pub fn with_range(spec: &CurveSpec, t0: f64, t1: f64) -> Result<CurveSpec> {
    match &spec.kind {
        CurveKind::Analytic { evaluator, .. } => {
            if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
                return Err(Error::BadParams(format!("parameter range [{t0}, {t1}] is empty")));
            }
            Ok(CurveSpec { kind: CurveKind::Analytic { evaluator: evaluator.clone(), t_range: (t0, t1) }, space: spec.space })
        }
        CurveKind::Sampled { .. } => Err(Error::BadParams("cannot change the range of a sampled curve".into())),
    }
}

fn point(c: &[f64]) -> VecN {
    VecN::from_slice(c).expect("generator produces finite points")
}

pub fn circular_helix(a: f64, b: f64) -> Result<CurveSpec> {
    if !(a > 0.0) {
        return Err(Error::BadParams(format!("helix radius a must be positive, got {a}")));
    }
    if b == 0.0 {
        return Err(Error::BadParams("helix pitch b must be nonzero (b = 0 is a planar circle)".into()));
    }
    let range = GeneratorKind::CircularHelix.default_range();
    CurveSpec::analytic(SpaceForm::Euclidean { dim: 3 }, range, move |t| {
        point(&[a * t.cos(), a * t.sin(), b * t])
    })
}

pub fn w_curve_5(a: f64, p: f64, b: f64, q: f64, c: f64) -> Result<CurveSpec> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::BadParams(format!("radii a, b must be positive, got a = {a}, b = {b}")));
    }
    if p == 0.0 || q == 0.0 {
        return Err(Error::BadParams("frequencies p, q must be nonzero".into()));
    }
    if p.abs() == q.abs() {
        return Err(Error::BadParams(format!("frequencies must be distinct, got |p| = |q| = {}", p.abs())));
    }
    if c == 0.0 {
        return Err(Error::BadParams("drift c must be nonzero (c = 0 lies in a 4-dimensional subspace)".into()));
    }
    let range = GeneratorKind::WCurve5.default_range();
    CurveSpec::analytic(SpaceForm::Euclidean { dim: 5 }, range, move |t| {
        let (sp, cp) = (p * t).sin_cos();
        let (sq, cq) = (q * t).sin_cos();
        point(&[a * cp, a * sp, b * cq, b * sq, c * t])
    })
}

pub fn clifford_s3(theta: f64, p: f64, q: f64) -> Result<CurveSpec> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::BadParams(format!("theta must lie in (0, π/2), got {theta}")));
    }
    if p == 0.0 || q == 0.0 {
        return Err(Error::BadParams("frequencies p, q must be nonzero".into()));
    }
    if p.abs() == q.abs() {
        return Err(Error::BadParams(format!("frequencies must be distinct, got |p| = |q| = {}", p.abs())));
    }
    let (st, ct) = theta.sin_cos();
    let range = GeneratorKind::CliffordS3.default_range();
    CurveSpec::analytic(SpaceForm::Sphere { dim: 3, radius: 1.0 }, range, move |t| {
        let (sp, cp) = (p * t).sin_cos();
        let (sq, cq) = (q * t).sin_cos();
        point(&[ct * cp, ct * sp, st * cq, st * sq])
    })
}

pub fn generic_3d(c1: f64, c2: f64, c3: f64) -> Result<CurveSpec> {
    if c1 == 0.0 {
        return Err(Error::BadParams("c1 must be nonzero (c1 = 0 can flatten the curve)".into()));
    }
    let range = GeneratorKind::Generic3d.default_range();
    CurveSpec::analytic(SpaceForm::Euclidean { dim: 3 }, range, move |t| {
        point(&[t, c1 * t * t, c2 * t * t * t + c3 * (2.0 * t).sin()])
    })
}

/// `base(t) + ε·sin(7t)·e_last`; on a sphere the offset is made tangent and
/// the point is pulled back onto the sphere.
pub fn perturbed(base: &CurveSpec, amplitude: f64) -> Result<CurveSpec> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::BadParams(format!("perturbation amplitude must be non-negative, got {amplitude}")));
    }
    let CurveKind::Analytic { evaluator, t_range } = &base.kind else {
        return Err(Error::BadParams("only analytic curves can be perturbed".into()));
    };
    let eval = evaluator.clone();
    let space = base.space;
    let last = space.ambient_dim() - 1;
    CurveSpec::analytic(space, *t_range, move |t| {
        let p = eval(t);
        let mut offset = VecN::basis(p.dim(), last).scaled(amplitude * (PERTURBATION_FREQUENCY * t).sin());
        match space {
            SpaceForm::Euclidean { .. } => &p + &offset,
            SpaceForm::Sphere { radius, .. } => {
                let c = offset.dot(&p) / p.norm_sq();
                offset.axpy(-c, &p);
                let q = &p + &offset;
                q.scaled(radius / q.norm())
            }
        }
    })
}
