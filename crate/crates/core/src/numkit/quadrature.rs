use crate::error::{Error, Result};

/// Cumulative integral of uniformly spaced samples, `out[0] == 0`.
///
/// Even nodes accumulate composite Simpson panels. Odd nodes add the first
/// half of the following panel from a four-point cubic rule, so every node
/// is exact for cubics. For non-negative data the half panel is clamped into
/// `[0, panel]`, which keeps the result monotone.
pub fn cumulative_quadrature(values: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: n });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
    }
    let f = values;
    let h = step;

    // Integral over [x_i, x_{i+1}] from a local cubic (quadratic if n == 3).
    let interval = |i: usize| -> f64 {
        if n == 3 {
            return if i == 0 {
                h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
            } else {
                h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2])
            };
        }
        if i == 0 {
            h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else if i + 2 >= n {
            h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4])
        } else {
            h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2])
        }
    };

    let mut out = vec![0.0; n];
    let mut i = 0;
    while i + 2 < n {
        let panel = h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        let mut half = interval(i);
        if f[i..=i + 2].iter().all(|v| *v >= 0.0) {
            half = half.clamp(0.0, panel);
        }
        out[i + 1] = out[i] + half;
        out[i + 2] = out[i] + panel;
        i += 2;
    }
    if i + 1 < n {
        // Even number of samples: the last interval stands alone.
        let mut last = interval(n - 2);
        if f[n - 2] >= 0.0 && f[n - 1] >= 0.0 {
            last = last.max(0.0);
        }
        out[n - 1] = out[n - 2] + last;
    }
    Ok(out)
}
