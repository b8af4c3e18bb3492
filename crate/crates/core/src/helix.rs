//! Darboux axis, helix classification and theorem verifiers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::curves::UnitSpeedCurve;
use crate::error::{Error, Result};
use crate::frenet::{frenet_apparatus, FrenetApparatus, DEFAULT_EPS_DEGENERATE};
use crate::harmonic::{
    closed_form_constant_ratios, criterion_residual, expanded_residual_odd, harmonic_curvatures, CriterionResidual,
    HarmonicProfile,
};
use crate::json::to_json_string;
use crate::numkit::{Grid, VecN};
use crate::spaceform::{covariant_derivative, parallel_transport_from, SpaceForm, TangentField};

pub const DEFAULT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxField {
    pub grid: Grid,
    pub d: Vec<VecN>,
    pub norm: Vec<f64>,
}

/// `D = v₁ + Σ_j H_j v_{j+2}`.
pub fn darboux_field(app: &FrenetApparatus, profile: &HarmonicProfile) -> Result<DarbouxField> {
    let n = app.dim();
    if profile.dim != n {
        return Err(Error::DimensionMismatch { expected: n, found: profile.dim });
    }
    if profile.len() != app.len() {
        return Err(Error::GridMismatch);
    }
    let d: Vec<VecN> = app
        .frames
        .iter()
        .enumerate()
        .map(|(node, frame)| {
            let mut d = frame[0].clone();
            for (j, h) in profile.values.iter().enumerate() {
                d.axpy(h[node], &frame[j + 2]);
            }
            d
        })
        .collect();
    let norm = d.iter().map(VecN::norm).collect();
    Ok(DarbouxField { grid: app.grid, d, norm })
}

/// `X = D/‖D‖`.
pub fn axis_field(darboux: &DarbouxField) -> TangentField {
    let vectors = darboux.d.iter().zip(&darboux.norm).map(|(d, n)| d.scaled(1.0 / n)).collect();
    TangentField { grid: darboux.grid, vectors }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Helix,
    NonHelix,
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Helix => "Helix",
            Verdict::NonHelix => "NonHelix",
            Verdict::Degenerate => "Degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub eps_degenerate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelixReport {
    pub verdict: Verdict,
    pub residual_rms: Option<f64>,
    pub angle_mean: Option<f64>,
    pub angle_spread: Option<f64>,
    pub sum_sq_spread: Option<f64>,
    pub transport_deviation: Option<f64>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    #[serde(skip)]
    pub angle_profile: Vec<f64>,
}

impl HelixReport {
    pub fn degenerate(tol: f64, cause: String) -> Self {
        HelixReport {
            verdict: Verdict::Degenerate,
            residual_rms: None,
            angle_mean: None,
            angle_spread: None,
            sum_sq_spread: None,
            transport_deviation: None,
            tolerances: Tolerances { tol, eps_degenerate: DEFAULT_EPS_DEGENERATE },
            cause: Some(cause),
            angle_profile: Vec::new(),
        }
    }

    pub fn to_json_string(&self) -> String {
        to_json_string(self)
    }
}

/// Every intermediate of the classification pipeline.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub apparatus: FrenetApparatus,
    pub profile: HarmonicProfile,
    pub residual: CriterionResidual,
    pub darboux: DarbouxField,
    pub axis: TangentField,
    /// The axis at the midpoint node, parallel transported along the curve.
    pub transported: TangentField,
    pub seed: usize,
}

impl Analysis {
    pub fn run(space: &SpaceForm, curve: &UnitSpeedCurve) -> Result<Self> {
        let apparatus = frenet_apparatus(space, curve, DEFAULT_EPS_DEGENERATE)?;
        let n = apparatus.dim();
        if n < 3 {
            return Err(Error::DimensionTooLow { needed: 3, found: n });
        }
        let profile = harmonic_curvatures(&apparatus)?;
        let residual = criterion_residual(&apparatus, &profile)?;
        let darboux = darboux_field(&apparatus, &profile)?;
        let axis = axis_field(&darboux);
        let seed = curve.len() / 2;
        let transported = parallel_transport_from(space, curve, seed, &axis.vectors[seed])?;
        Ok(Analysis { apparatus, profile, residual, darboux, axis, transported, seed })
    }

    pub fn interior(&self) -> Range<usize> {
        self.apparatus.interior()
    }

    /// `⟨v₁, X⟩` with the transported axis.
    pub fn angle_profile(&self) -> Vec<f64> {
        self.apparatus.frames.iter().zip(&self.transported.vectors).map(|(f, x)| f[0].dot(x)).collect()
    }

    pub fn angle_stats(&self) -> (f64, f64) {
        let angles = self.angle_profile();
        let slice = &angles[self.interior()];
        let mean = slice.iter().sum::<f64>() / slice.len() as f64;
        (mean, spread(slice))
    }

    /// RMS deviation of `Σ H_j²` about its mean, relative to the mean.
    pub fn sum_sq_spread(&self) -> f64 {
        let sums = self.profile.sum_of_squares();
        relative_rms_spread(&sums[self.interior()])
    }

    pub fn transport_deviation(&self) -> f64 {
        self.interior()
            .map(|node| self.transported.vectors[node].distance(&self.axis.vectors[node]))
            .fold(0.0, f64::max)
    }
}

fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    hi - lo
}

fn relative_rms_spread(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let rms = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
    if mean.abs() > 0.0 {
        rms / mean.abs()
    } else {
        rms
    }
}

/// Helix iff the normalized criterion residual and the spread of the
/// angle between the tangent and the transported axis are both below `tol`.
pub fn classify(space: &SpaceForm, curve: &UnitSpeedCurve, tol: f64) -> Result<HelixReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadParams(format!("tolerance must be positive, got {tol}")));
    }
    let analysis = match Analysis::run(space, curve) {
        Ok(a) => a,
        Err(e) => return Ok(HelixReport::degenerate(tol, e.to_string())),
    };
    let residual_rms = analysis.residual.rms_normalized();
    let (angle_mean, angle_spread) = analysis.angle_stats();
    let verdict = if residual_rms < tol && angle_spread < tol { Verdict::Helix } else { Verdict::NonHelix };
    Ok(HelixReport {
        verdict,
        residual_rms: Some(residual_rms),
        angle_mean: Some(angle_mean),
        angle_spread: Some(angle_spread),
        sum_sq_spread: Some(analysis.sum_sq_spread()),
        transport_deviation: Some(analysis.transport_deviation()),
        tolerances: Tolerances { tol, eps_degenerate: DEFAULT_EPS_DEGENERATE },
        cause: None,
        angle_profile: analysis.angle_profile(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `⟨v_{i+2}, X⟩ = H_i ⟨v₁, X⟩`.
    T3,
    /// `∇_{v₁} D = (H'_{n-2} + k_{n-1} H_{n-3}) v_n`.
    T6,
    /// `Σ H_j² = tan² φ`, constant.
    T7,
    /// The odd-dimension expansion agrees with the criterion residual.
    T8C9,
    /// Closed form of `H` for constant curvature ratios.
    T10,
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T3" => Ok(Theorem::T3),
            "T6" => Ok(Theorem::T6),
            "T7" => Ok(Theorem::T7),
            "T8≡C9" | "T8=C9" | "T8C9" | "T8" | "C9" => Ok(Theorem::T8C9),
            "T10" => Ok(Theorem::T10),
            _ => Err(Error::BadParams(format!("unknown theorem '{s}' (expected T3, T6, T7, T8≡C9 or T10)"))),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T3 => "T3",
            Theorem::T6 => "T6",
            Theorem::T7 => "T7",
            Theorem::T8C9 => "T8≡C9",
            Theorem::T10 => "T10",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub theorem: String,
    pub max_deviation: f64,
    pub details: BTreeMap<String, f64>,
}

impl Verification {
    pub fn to_json_string(&self) -> String {
        to_json_string(self)
    }
}

/// Numerical check of one identity. T3, T6 and T7 are statements about
/// helices and require a Helix verdict at the default tolerance.
pub fn verify_theorem(theorem: Theorem, space: &SpaceForm, curve: &UnitSpeedCurve) -> Result<Verification> {
    let analysis = Analysis::run(space, curve)?;
    let mut details = BTreeMap::new();
    let needs_helix = matches!(theorem, Theorem::T3 | Theorem::T6 | Theorem::T7);
    if needs_helix {
        let report = classify(space, curve, DEFAULT_TOL)?;
        if report.verdict != Verdict::Helix {
            return Err(Error::NotAHelix(format!(
                "verdict {} (residual_rms {:.3e}, angle_spread {:.3e})",
                report.verdict,
                report.residual_rms.unwrap_or(f64::NAN),
                report.angle_spread.unwrap_or(f64::NAN)
            )));
        }
    }
    let app = &analysis.apparatus;
    let n = app.dim();
    let range = analysis.interior();
    let max_deviation = match theorem {
        Theorem::T3 => {
            let mut worst = 0.0f64;
            for node in range {
                let frame = &app.frames[node];
                let x = &analysis.transported.vectors[node];
                let cos = frame[0].dot(x);
                for (i, h) in analysis.profile.values.iter().enumerate() {
                    worst = worst.max((frame[i + 2].dot(x) - h[node] * cos).abs());
                }
            }
            worst
        }
        Theorem::T6 => {
            let field = TangentField::new(analysis.darboux.grid, analysis.darboux.d.clone())?;
            let dd = covariant_derivative(space, curve, &field)?;
            let scale = app.curvatures.iter().flatten().fold(0.0f64, |m, k| m.max(k.abs()));
            let mut worst = 0.0f64;
            for node in range {
                let mut diff = dd.vectors[node].clone();
                diff.axpy(-analysis.residual.residual[node], &app.frames[node][n - 1]);
                worst = worst.max(diff.norm());
            }
            details.insert("curvature_scale".into(), scale);
            worst / scale
        }
        Theorem::T7 => {
            let sums = analysis.profile.sum_of_squares();
            let slice = &sums[range];
            let mean = slice.iter().sum::<f64>() / slice.len() as f64;
            let rel = relative_rms_spread(slice);
            let (cos, _) = analysis.angle_stats();
            details.insert("sum_sq_mean".into(), mean);
            details.insert("sum_sq_spread".into(), rel);
            if cos.abs() > 0.0 {
                let tan2 = (1.0 - cos * cos) / (cos * cos);
                details.insert("tan2_phi".into(), tan2);
                rel.max((mean - tan2).abs())
            } else {
                rel
            }
        }
        Theorem::T8C9 => {
            let expanded = expanded_residual_odd(app, &analysis.profile)?;
            let r = &analysis.residual;
            details.insert("normalization".into(), r.normalization);
            details.insert("criterion_max".into(), r.max_normalized());
            range
                .map(|node| (expanded.residual[node] - r.residual[node]).abs())
                .fold(0.0, f64::max)
                / r.normalization
        }
        Theorem::T10 => {
            let m = (n - 1) / 2;
            let mut ratios = Vec::with_capacity(m);
            for j in 1..=m {
                let (a, b) = (app.curvature(2 * j - 1), app.curvature(2 * j));
                let r: Vec<f64> = range.clone().map(|node| a[node] / b[node]).collect();
                let rel = relative_rms_spread(&r);
                details.insert(format!("ratio_{j}_spread"), rel);
                if rel > DEFAULT_TOL {
                    return Err(Error::Inapplicable(format!(
                        "curvature ratio k{}/k{} is not constant (relative spread {rel:.3e})",
                        2 * j - 1,
                        2 * j
                    )));
                }
                ratios.push(r.iter().sum::<f64>() / r.len() as f64);
            }
            let mut worst = 0.0f64;
            for node in range {
                let pointwise: Vec<f64> = (1..=m)
                    .map(|j| app.curvatures[node][2 * j - 2] / app.curvatures[node][2 * j - 1])
                    .collect();
                let mut closed = closed_form_constant_ratios(&pointwise);
                closed.resize(n - 2, 0.0);
                for (i, expect) in closed.iter().enumerate() {
                    let got = analysis.profile.values[i][node];
                    let dev = if *expect != 0.0 { (got - expect).abs() / expect.abs() } else { got.abs() };
                    worst = worst.max(dev);
                }
            }
            for (j, r) in ratios.iter().enumerate() {
                details.insert(format!("ratio_{}", j + 1), *r);
            }
            worst
        }
    };
    Ok(Verification { theorem: theorem.to_string(), max_deviation, details })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{generators, resample_by_arclength};

    fn helix() -> (SpaceForm, UnitSpeedCurve) {
        let spec = generators::circular_helix(3.0, 4.0).unwrap();
        (spec.space, resample_by_arclength(&spec, 2000).unwrap())
    }

    #[test]
    fn helix_darboux_and_axis() {
        let (space, curve) = helix();
        let a = Analysis::run(&space, &curve).unwrap();
        let z = VecN::basis(3, 2);
        for node in a.interior() {
            assert!((a.darboux.norm[node] - 1.25).abs() < 1e-8);
            assert!(a.darboux.d[node].dot(&a.apparatus.frames[node][1]).abs() < 1e-8 * a.darboux.norm[node]);
            assert!(a.axis.vectors[node].distance(&z) < 1e-6);
            assert!((a.axis.vectors[node].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn helix_classifies() {
        let (space, curve) = helix();
        let r = classify(&space, &curve, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Helix);
        assert!((r.angle_mean.unwrap() - 0.8).abs() < 1e-6);
        assert!(r.sum_sq_spread.unwrap() < 1e-8);
        let json: serde_json::Value = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(json["verdict"], "Helix");
        assert!(json.get("cause").is_none());
    }

    #[test]
    fn helix_theorems() {
        let (space, curve) = helix();
        assert!(verify_theorem(Theorem::T3, &space, &curve).unwrap().max_deviation < 1e-5);
        let t7 = verify_theorem(Theorem::T7, &space, &curve).unwrap();
        assert!((t7.details["sum_sq_mean"] - 0.5625).abs() < 1e-6);
        assert!(t7.max_deviation < 1e-5);
        assert!(verify_theorem(Theorem::T6, &space, &curve).unwrap().max_deviation < 1e-5);
        assert!(verify_theorem(Theorem::T10, &space, &curve).unwrap().max_deviation < 1e-6);
        assert_eq!(verify_theorem(Theorem::T8C9, &space, &curve).unwrap_err(), Error::DimensionTooLow { needed: 5, found: 3 });
    }

    #[test]
    fn perturbed_helix_is_not_a_helix() {
        let base = generators::circular_helix(3.0, 4.0).unwrap();
        let spec = generators::perturbed(&base, 0.05).unwrap();
        let curve = resample_by_arclength(&spec, 2000).unwrap();
        let r = classify(&spec.space, &curve, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::NonHelix);
        assert!(matches!(verify_theorem(Theorem::T3, &spec.space, &curve), Err(Error::NotAHelix(_))));
    }

    #[test]
    fn degenerate_report_has_cause_and_nulls() {
        let r = HelixReport::degenerate(1e-3, "k1 vanishes".into());
        let json: serde_json::Value = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(json["verdict"], "Degenerate");
        assert!(json["residual_rms"].is_null());
        assert_eq!(json["cause"], "k1 vanishes");
    }

    #[test]
    fn theorem_names() {
        for (s, t) in [("T3", Theorem::T3), ("t6", Theorem::T6), ("T8≡C9", Theorem::T8C9), ("T8=C9", Theorem::T8C9), ("T10", Theorem::T10)] {
            assert_eq!(s.parse::<Theorem>().unwrap(), t);
        }
        assert!("T9".parse::<Theorem>().is_err());
    }
}
