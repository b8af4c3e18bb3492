//! Interpolation helpers for resampling and off-node evaluation.

use super::grid::Grid;
use super::vector::VecN;

const LAGRANGE_POINTS: usize = 6;

fn lagrange_window(count: usize, grid: &Grid, s: f64) -> (usize, f64) {
    let x = (s - grid.start()) / grid.step();
    let base = x.floor() as isize - (LAGRANGE_POINTS as isize / 2 - 1);
    let max_base = count as isize - LAGRANGE_POINTS as isize;
    (base.clamp(0, max_base.max(0)) as usize, x)
}

fn lagrange_weights(first: usize, count: usize, x: f64) -> Vec<f64> {
    let m = LAGRANGE_POINTS.min(count);
    (0..m)
        .map(|j| {
            let xj = (first + j) as f64;
            (0..m)
                .filter(|&k| k != j)
                .map(|k| {
                    let xk = (first + k) as f64;
                    (x - xk) / (xj - xk)
                })
                .product()
        })
        .collect()
}

/// Six-point Lagrange interpolation of uniformly sampled vectors at `s`.
///
/// Exact at the nodes; the window is shifted inward near the ends.
pub fn interp_vectors(values: &[VecN], grid: &Grid, s: f64) -> VecN {
    let (first, x) = lagrange_window(values.len(), grid, s);
    let nearest = x.round();
    if (x - nearest).abs() < 1e-12 && nearest >= 0.0 && (nearest as usize) < values.len() {
        return values[nearest as usize].clone();
    }
    let w = lagrange_weights(first, values.len(), x);
    let mut out = VecN::zeros(values[0].dim());
    for (j, wj) in w.iter().enumerate() {
        out.axpy(*wj, &values[first + j]);
    }
    out
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing and `ys` monotone.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n);
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (a, b) = (secants[i - 1], secants[i]);
            slopes[i] = if a * b <= 0.0 {
                0.0
            } else {
                // Weighted harmonic mean keeps the interpolant monotone.
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / a + w2 / b)
            };
        }
        MonotoneCubic { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}
