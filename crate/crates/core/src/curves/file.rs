//! Curve files: `{"space", "param", "samples", "params"?}` as JSON.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_sample_count, resample_by_arclength, CurveSpec, UnitSpeedCurve, LOADED_SPEED_TOL};
use crate::error::{Error, Result};
use crate::json::to_json_string;
use crate::numkit::{diff_field, Grid, VecN};
use crate::spaceform::SpaceForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    /// Samples are spaced uniformly by arclength.
    Arclength,
    /// Samples at arbitrary (uniformly spaced) parameter values.
    Generic,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurveFile {
    space: String,
    param: ParamKind,
    samples: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFile {
    pub space: SpaceForm,
    pub param: ParamKind,
    pub samples: Vec<VecN>,
    pub params: Option<Vec<f64>>,
}

impl CurveFile {
    pub fn from_unit_speed(space: SpaceForm, curve: &UnitSpeedCurve) -> Self {
        CurveFile {
            space,
            param: ParamKind::Arclength,
            samples: curve.points.clone(),
            params: Some(curve.grid.nodes().collect()),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawCurveFile = serde_json::from_str(text).map_err(|e| {
            Error::Format(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        let space: SpaceForm = raw
            .space
            .parse()
            .map_err(|e| Error::Format(format!("field \"space\": {e}")))?;
        let dim = space.ambient_dim();
        let mut samples = Vec::with_capacity(raw.samples.len());
        for (i, row) in raw.samples.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Format(format!(
                    "field \"samples\"[{i}]: expected {dim} coordinates for {space}, found {}",
                    row.len()
                )));
            }
            let p = VecN::new(row).map_err(|e| Error::Format(format!("field \"samples\"[{i}]: {e}")))?;
            space
                .check_point(&p)
                .map_err(|e| Error::Format(format!("field \"samples\"[{i}]: {e}")))?;
            samples.push(p);
        }
        check_sample_count(&space, samples.len()).map_err(|e| Error::Format(format!("field \"samples\": {e}")))?;
        if let Some(params) = &raw.params {
            if params.len() != samples.len() {
                return Err(Error::Format(format!(
                    "field \"params\": {} values for {} samples",
                    params.len(),
                    samples.len()
                )));
            }
            if params.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Format("field \"params\": values must be strictly increasing".into()));
            }
        }
        Ok(CurveFile { space, param: raw.param, samples, params: raw.params })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json_string(&self) -> String {
        let raw = RawCurveFile {
            space: self.space.to_string(),
            param: self.param,
            samples: self.samples.iter().map(|p| p.as_slice().to_vec()).collect(),
            params: self.params.clone(),
        };
        to_json_string(&raw)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Unit-speed curve described by the file.
    ///
    /// Arclength files are used as-is; without explicit `params` the step is
    /// recovered from the mean stencil speed at unit spacing. Generic files are
    /// resampled onto `node_count` nodes (default: the sample count).
    pub fn to_curve(&self, node_count: Option<usize>) -> Result<UnitSpeedCurve> {
        let n = self.samples.len();
        match self.param {
            ParamKind::Arclength => {
                let grid = match &self.params {
                    Some(ps) => {
                        let grid = Grid::spanning(ps[0], ps[n - 1], n)?;
                        if ps.iter().enumerate().any(|(i, p)| (p - grid.node(i)).abs() > 1e-9 * grid.step()) {
                            return Err(Error::Format("field \"params\": arclength values must be uniform".into()));
                        }
                        grid
                    }
                    None => {
                        let unit = diff_field(&self.samples, 1.0)?;
                        let mean = unit.iter().map(VecN::norm).sum::<f64>() / n as f64;
                        Grid::new(0.0, mean, n)?
                    }
                };
                let curve = UnitSpeedCurve::from_arclength_samples(&self.space, grid, self.samples.clone())
                    .map_err(|e| match e {
                        Error::BadParams(msg) => Error::Format(format!("{msg} (tolerance {LOADED_SPEED_TOL:e})")),
                        other => other,
                    })?;
                Ok(curve)
            }
            ParamKind::Generic => {
                let params = match &self.params {
                    Some(ps) => ps.clone(),
                    None => (0..n).map(|i| i as f64).collect(),
                };
                let spec = CurveSpec::sampled(self.space, self.samples.clone(), params)?;
                resample_by_arclength(&spec, node_count.unwrap_or(n))
            }
        }
    }
}
