use super::grid::Grid;
use crate::error::{Error, Result};

/// Classical fourth-order Runge-Kutta on the nodes of `grid`.
///
/// `trajectory[0] == y0`; one step per grid interval.
pub fn integrate_ode<F>(field: F, y0: &[f64], grid: &Grid) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    integrate_ode_with(field, y0, grid, |_, _| {})
}

/// Like [`integrate_ode`], calling `post(node_index, state)` after each step
/// so the caller can restore constraints (projection, renormalization).
pub fn integrate_ode_with<F, P>(field: F, y0: &[f64], grid: &Grid, mut post: P) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    P: FnMut(usize, &mut [f64]),
{
    let dim = y0.len();
    let h = grid.step();
    let eval = |s: f64, y: &[f64]| -> Result<Vec<f64>> {
        let k = field(s, y);
        if k.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: k.len() });
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteField { s });
        }
        Ok(k)
    };
    let offset = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(y, k)| y + a * k).collect()
    };

    let mut trajectory = Vec::with_capacity(grid.len());
    trajectory.push(y0.to_vec());
    let mut y = y0.to_vec();
    for i in 0..grid.len() - 1 {
        let s = grid.node(i);
        let k1 = eval(s, &y)?;
        let k2 = eval(s + 0.5 * h, &offset(&y, &k1, 0.5 * h))?;
        let k3 = eval(s + 0.5 * h, &offset(&y, &k2, 0.5 * h))?;
        let k4 = eval(grid.node(i + 1), &offset(&y, &k3, h))?;
        for (j, yj) in y.iter_mut().enumerate() {
            *yj += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        post(i + 1, &mut y);
        trajectory.push(y.clone());
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2};

    #[test]
    fn zero_field_is_constant() {
        let g = Grid::spanning(0.0, 1.0, 11).unwrap();
        let traj = integrate_ode(|_, _| vec![0.0, 0.0], &[1.0, 2.0], &g).unwrap();
        assert!(traj.iter().all(|y| y == &[1.0, 2.0]));
    }

    #[test]
    fn exponential_growth() {
        let g = Grid::spanning(0.0, 1.0, 1001).unwrap();
        let traj = integrate_ode(|_, y| vec![y[0]], &[1.0], &g).unwrap();
        assert!((traj.last().unwrap()[0] - E).abs() < 1e-10);
    }

    #[test]
    fn rotation_quarter_turn() {
        let g = Grid::spanning(0.0, FRAC_PI_2, 1001).unwrap();
        let traj = integrate_ode(|_, y| vec![-y[1], y[0]], &[1.0, 0.0], &g).unwrap();
        let end = traj.last().unwrap();
        assert!(end[0].abs() < 1e-9 && (end[1] - 1.0).abs() < 1e-9, "{end:?}");
        let drift = traj.iter().map(|y| (y[0].hypot(y[1]) - 1.0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-12, "norm drift {drift:e}");
    }

    #[test]
    fn norm_preserving_field_in_three_dimensions() {
        // y' = w x y with a fixed rotation axis; path length 20 at step 1e-3.
        let w = [0.3, -0.4, 0.5];
        let g = Grid::spanning(0.0, 20.0, 20_001).unwrap();
        let field = |_: f64, y: &[f64]| {
            vec![w[1] * y[2] - w[2] * y[1], w[2] * y[0] - w[0] * y[2], w[0] * y[1] - w[1] * y[0]]
        };
        let traj = integrate_ode(field, &[1.0, 2.0, -1.0], &g).unwrap();
        let n0 = 6.0_f64.sqrt();
        let drift = traj
            .iter()
            .map(|y| ((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt() - n0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-9 * (1.0 + 20.0), "drift {drift:e}");
    }

    #[test]
    fn non_finite_field_is_reported() {
        let g = Grid::spanning(0.0, 1.0, 11).unwrap();
        let err = integrate_ode(|s, _| vec![if s > 0.45 { f64::NAN } else { 1.0 }], &[0.0], &g);
        assert!(matches!(err, Err(Error::NonFiniteField { .. })));
    }

    #[test]
    fn post_hook_sees_every_node() {
        let g = Grid::spanning(0.0, 1.0, 6).unwrap();
        let mut seen = Vec::new();
        integrate_ode_with(|_, _| vec![1.0], &[0.0], &g, |i, y| {
            seen.push(i);
            y[0] = 0.0;
        })
        .unwrap();
        assert_eq!(seen, vec![1, 2, 3, 4, 5]);
    }
}
