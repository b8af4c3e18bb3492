//! Harmonic curvatures and the helix criterion residuals.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frenet::{FrenetApparatus, DEFAULT_EPS_DEGENERATE, MAX_DEGENERATE_FRACTION};
use crate::json::to_json_string;
use crate::numkit::{diff_stencil, Grid};

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicProfile {
    pub grid: Grid,
    /// Intrinsic dimension `n` of the apparatus the profile came from.
    pub dim: usize,
    /// `values[i - 1]` is `H_i` along the curve, `i = 1..=n-2`.
    pub values: Vec<Vec<f64>>,
    /// Nodes where `H_{n-2}` was interpolated because `|k_{n-1}|` fell below
    /// the threshold.
    pub masked: Vec<bool>,
}

impl HarmonicProfile {
    pub fn len(&self) -> usize {
        self.masked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masked.is_empty()
    }

    /// Number of stored functions, `n - 2`.
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// `H_i` for `i ≥ -1`, with `H₋₁ = 1` and `H₀ = 0`.
    pub fn h(&self, i: isize) -> Vec<f64> {
        match i {
            -1 => vec![1.0; self.len()],
            0 => vec![0.0; self.len()],
            i if i > 0 && (i as usize) <= self.count() => self.values[i as usize - 1].clone(),
            _ => panic!("H_{i} is outside -1..={}", self.count()),
        }
    }

    /// `Σ_j H_j²` per node.
    pub fn sum_of_squares(&self) -> Vec<f64> {
        (0..self.len()).map(|node| self.values.iter().map(|h| h[node] * h[node]).sum()).collect()
    }

    pub fn to_json_string(&self, residual: Option<&CriterionResidual>) -> String {
        #[derive(Serialize)]
        #[serde(rename_all = "snake_case")]
        struct Export<'a> {
            s: Vec<f64>,
            #[serde(rename = "H")]
            h: Vec<Vec<f64>>,
            masked: &'a [bool],
            criterion_residual: Option<&'a [f64]>,
            normalization: Option<f64>,
        }
        to_json_string(&Export {
            s: self.grid.nodes().collect(),
            h: (0..self.len()).map(|node| self.values.iter().map(|h| h[node]).collect()).collect(),
            masked: &self.masked,
            criterion_residual: residual.map(|r| r.residual.as_slice()),
            normalization: residual.map(|r| r.normalization),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResidual {
    pub grid: Grid,
    pub residual: Vec<f64>,
    pub normalization: f64,
    /// Nodes over which summaries are taken.
    pub interior: Range<usize>,
}

impl CriterionResidual {
    pub fn normalized(&self) -> Vec<f64> {
        self.residual.iter().map(|r| r / self.normalization).collect()
    }

    pub fn max_normalized(&self) -> f64 {
        self.residual[self.interior.clone()].iter().fold(0.0f64, |m, r| m.max(r.abs())) / self.normalization
    }

    pub fn rms_normalized(&self) -> f64 {
        let slice = &self.residual[self.interior.clone()];
        (slice.iter().map(|r| r * r).sum::<f64>() / slice.len() as f64).sqrt() / self.normalization
    }
}

pub fn harmonic_curvatures(app: &FrenetApparatus) -> Result<HarmonicProfile> {
    harmonic_curvatures_with(app, DEFAULT_EPS_DEGENERATE)
}

/// `H₁ = k₁/k₂`, `H_i = (H'_{i-1} + H_{i-2}k_i)/k_{i+1}` for `2 ≤ i ≤ n-2`.
///
/// `H_{n-2}` divides by `k_{n-1}`, which may legitimately vanish; it is
/// interpolated where `|k_{n-1}| < eps` as long as that stays isolated.
pub fn harmonic_curvatures_with(app: &FrenetApparatus, eps: f64) -> Result<HarmonicProfile> {
    let n = app.dim();
    let len = app.len();
    let h = app.grid.step();
    let range = app.interior();
    if n < 3 {
        return Ok(HarmonicProfile { grid: app.grid, dim: n, values: Vec::new(), masked: vec![false; len] });
    }
    for i in 1..n - 1 {
        if app.curvature(i).iter().any(|k| !(*k >= eps)) {
            let below = range.clone().filter(|&node| !(app.curvatures[node][i - 1] >= eps)).count();
            return Err(Error::DegenerateCurvature { index: i, fraction: 100.0 * below as f64 / range.len() as f64 });
        }
    }
    let last = app.curvature(n - 1);
    let masked: Vec<bool> = last.iter().map(|k| !(k.abs() >= eps)).collect();
    let masked_interior = range.clone().filter(|&node| masked[node]).count();
    if masked.iter().all(|&m| m) || masked_interior as f64 > MAX_DEGENERATE_FRACTION * range.len() as f64 {
        return Err(Error::DegenerateCurvature {
            index: n - 1,
            fraction: 100.0 * masked_interior as f64 / range.len() as f64,
        });
    }

    let mut values: Vec<Vec<f64>> = Vec::with_capacity(n - 2);
    let mut prev2 = vec![0.0; len];
    let mut prev1: Vec<f64> = Vec::new();
    for i in 1..=n - 2 {
        let k_i = app.curvature(i);
        let k_next = app.curvature(i + 1);
        let mut hi: Vec<f64> = if i == 1 {
            k_i.iter().zip(&k_next).map(|(a, b)| a / b).collect()
        } else {
            let d = diff_stencil(&prev1, h, 1)?;
            (0..len).map(|node| (d[node] + prev2[node] * k_i[node]) / k_next[node]).collect()
        };
        if i == n - 2 {
            interpolate_masked(&mut hi, &masked);
        }
        if i > 1 {
            prev2 = prev1;
        }
        prev1 = hi.clone();
        values.push(hi);
    }
    Ok(HarmonicProfile { grid: app.grid, dim: n, values, masked })
}

fn interpolate_masked(values: &mut [f64], masked: &[bool]) {
    for node in 0..values.len() {
        if masked[node] {
            let left = (0..node).rev().find(|&j| !masked[j]);
            let right = (node + 1..values.len()).find(|&j| !masked[j]);
            values[node] = match (left, right) {
                (Some(l), Some(r)) => {
                    let w = (node - l) as f64 / (r - l) as f64;
                    (1.0 - w) * values[l] + w * values[r]
                }
                (Some(l), None) => values[l],
                (None, Some(r)) => values[r],
                (None, None) => values[node],
            };
        }
    }
}

/// Harmonic curvatures `H₁ … H_{2m-1}` of a curve whose ratios
/// `r_j = k_{2j-1}/k_{2j}` are constant: `H_{2i} = 0` and
/// `H_{2i+1} = r₁ r₂ ⋯ r_{i+1}`.
pub fn closed_form_constant_ratios(ratios: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * ratios.len());
    let mut product = 1.0;
    for (j, r) in ratios.iter().enumerate() {
        if j > 0 {
            out.push(0.0);
        }
        product *= r;
        out.push(product);
    }
    out
}

fn check_profile(app: &FrenetApparatus, profile: &HarmonicProfile) -> Result<()> {
    if profile.dim != app.dim() {
        return Err(Error::DimensionMismatch { expected: app.dim(), found: profile.dim });
    }
    if profile.len() != app.len() || !profile.grid.matches(&app.grid) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `max |k_{n-1}| · (1 + mean Σ H_j²)^{1/2}` over the interior.
fn normalization(app: &FrenetApparatus, profile: &HarmonicProfile) -> Result<f64> {
    let range = app.interior();
    let k_last = app.curvature(app.dim() - 1);
    let k_max = range.clone().fold(0.0f64, |m, node| m.max(k_last[node].abs()));
    let sums = profile.sum_of_squares();
    let mean = range.clone().map(|node| sums[node]).sum::<f64>() / range.len() as f64;
    let norm = k_max * (1.0 + mean).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::DegenerateCurvature { index: app.dim() - 1, fraction: 100.0 });
    }
    Ok(norm)
}

/// `r = H'_{n-2} + k_{n-1} H_{n-3}`.
pub fn criterion_residual(app: &FrenetApparatus, profile: &HarmonicProfile) -> Result<CriterionResidual> {
    check_profile(app, profile)?;
    let n = app.dim();
    if n < 3 {
        return Err(Error::DimensionTooLow { needed: 3, found: n });
    }
    let d = diff_stencil(&profile.h(n as isize - 2), app.grid.step(), 1)?;
    let k = app.curvature(n - 1);
    let lower = profile.h(n as isize - 3);
    let residual = (0..app.len()).map(|node| d[node] + k[node] * lower[node]).collect();
    Ok(CriterionResidual {
        grid: app.grid,
        residual,
        normalization: normalization(app, profile)?,
        interior: app.interior(),
    })
}

/// The odd-dimension expansion of the criterion for `n = 2m + 1`:
/// `Σ_j w_j · H'_{2m-1-2j}` with `w₀ = 1`, `w_j = w_{j-1} k_{2m-2j+2}/k_{2m-2j+1}`,
/// where the last term uses `(k₁/k₂)'` taken directly from the curvatures.
pub fn expanded_residual_odd(app: &FrenetApparatus, profile: &HarmonicProfile) -> Result<CriterionResidual> {
    check_profile(app, profile)?;
    let n = app.dim();
    if n % 2 == 0 {
        return Err(Error::EvenDimension(n));
    }
    if n < 5 {
        return Err(Error::DimensionTooLow { needed: 5, found: n });
    }
    let m = (n - 1) / 2;
    let len = app.len();
    let step = app.grid.step();
    let mut residual = vec![0.0; len];
    let mut weight = vec![1.0; len];
    for j in 0..m {
        if j > 0 {
            let num = app.curvature(2 * m - 2 * j + 2);
            let den = app.curvature(2 * m - 2 * j + 1);
            for node in 0..len {
                weight[node] *= num[node] / den[node];
            }
        }
        let index = 2 * m - 1 - 2 * j;
        let d = if index == 1 {
            let (k1, k2) = (app.curvature(1), app.curvature(2));
            let ratio: Vec<f64> = k1.iter().zip(&k2).map(|(a, b)| a / b).collect();
            diff_stencil(&ratio, step, 1)?
        } else {
            diff_stencil(&profile.h(index as isize), step, 1)?
        };
        for node in 0..len {
            residual[node] += weight[node] * d[node];
        }
    }
    Ok(CriterionResidual {
        grid: app.grid,
        residual,
        normalization: normalization(app, profile)?,
        interior: app.interior(),
    })
}
