//! Fixed five-point finite-difference stencils on uniform grids.
//!
//! Interior nodes use the central stencils; the first and last two nodes use
//! the one-sided five-point stencils, so the output has the same length as
//! the input and every node is fourth-order (first derivative) or at least
//! third-order (second derivative) accurate.

use super::vector::VecN;
use crate::error::{Error, Result};

pub const STENCIL_WIDTH: usize = 5;

// Rows are weights over f[0..5] (scaled by 1/12).
const D1_LEFT: [[f64; 5]; 2] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
];
const D1_CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

const D2_LEFT: [[f64; 5]; 2] = [
    [35.0, -104.0, 114.0, -56.0, 11.0],
    [11.0, -20.0, 6.0, 4.0, -1.0],
];
const D2_CENTRAL: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

#[inline]
fn apply(weights: &[f64; 5], window: &[f64]) -> f64 {
    weights.iter().zip(window).map(|(w, f)| w * f).sum()
}

/// Derivative of uniformly spaced samples, `order` 1 or 2.
pub fn diff_stencil(samples: &[f64], step: f64, order: u8) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < STENCIL_WIDTH {
        return Err(Error::TooFewSamples { needed: STENCIL_WIDTH, found: n });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
    }
    let (left, central, scale, sign) = match order {
        1 => (&D1_LEFT, &D1_CENTRAL, 1.0 / (12.0 * step), -1.0),
        2 => (&D2_LEFT, &D2_CENTRAL, 1.0 / (12.0 * step * step), 1.0),
        other => return Err(Error::BadParams(format!("stencil order must be 1 or 2, got {other}"))),
    };

    let mut out = vec![0.0; n];
    for i in 2..n - 2 {
        out[i] = apply(central, &samples[i - 2..=i + 2]) * scale;
    }
    let head = &samples[..5];
    let mut tail = [0.0; 5];
    for (k, t) in tail.iter_mut().enumerate() {
        *t = samples[n - 1 - k];
    }
    for k in 0..2 {
        out[k] = apply(&left[k], head) * scale;
        // Mirrored stencil: odd derivatives flip sign.
        out[n - 1 - k] = sign * apply(&left[k], &tail) * scale;
    }
    Ok(out)
}

/// First derivative of a vector-valued sequence, componentwise.
pub fn diff_field(values: &[VecN], step: f64) -> Result<Vec<VecN>> {
    let Some(first) = values.first() else {
        return Err(Error::TooFewSamples { needed: STENCIL_WIDTH, found: 0 });
    };
    let dim = first.dim();
    if let Some(bad) = values.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    let mut columns = Vec::with_capacity(dim);
    let mut buf = vec![0.0; values.len()];
    for c in 0..dim {
        for (b, v) in buf.iter_mut().zip(values) {
            *b = v[c];
        }
        columns.push(diff_stencil(&buf, step, 1)?);
    }
    Ok((0..values.len())
        .map(|i| VecN::from_raw(columns.iter().map(|col| col[i]).collect()))
        .collect())
}
