use crate::error::{Error, Result};

pub const MIN_GRID_NODES: usize = 5;

/// Uniform one-dimensional grid `start + i * step`, `i in 0..count`.
///
/// Nodes are recomputed from the index every time, so there is no
/// cumulative drift along long grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if count < MIN_GRID_NODES {
            return Err(Error::TooFewSamples { needed: MIN_GRID_NODES, found: count });
        }
        Self::segment(start, step, count)
    }

    /// Grid over `[start, end]` with `count` nodes.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::TooFewSamples { needed: MIN_GRID_NODES, found: count });
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    /// Short grid used for ODE sub-intervals; only requires two nodes.
    pub(crate) fn segment(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive and finite, got {step}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least two nodes, got {count}")));
        }
        Ok(Grid { start, step, count })
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.start
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.step
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }

    pub fn length(&self) -> f64 {
        self.end() - self.start
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    /// Two grids describe the same nodes up to rounding in their step.
    pub fn matches(&self, other: &Grid) -> bool {
        self.count == other.count
            && (self.start - other.start).abs() <= 1e-12 * (1.0 + self.start.abs())
            && (self.step - other.step).abs() <= 1e-12 * self.step
    }
}
