use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

/// A small dense vector of ambient coordinates.
///
/// The dimension is fixed at construction and lies in `MIN_DIM..=MAX_DIM`;
/// every component is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct VecN(Vec<f64>);

impl VecN {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&components.len()) {
            return Err(Error::DimensionOutOfRange(components.len()));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("vector component"));
        }
        Ok(VecN(components))
    }

    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::new(components.to_vec())
    }

    /// Wraps raw components produced by arithmetic on valid vectors.
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        debug_assert!((MIN_DIM..=MAX_DIM).contains(&components.len()));
        VecN(components)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((MIN_DIM..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        VecN(vec![0.0; dim])
    }

    /// Standard basis vector `e_axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    #[inline]
    pub fn dot(&self, other: &VecN) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> VecN {
        VecN(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self += alpha * x`
    #[inline]
    pub fn axpy(&mut self, alpha: f64, x: &VecN) {
        debug_assert_eq!(self.dim(), x.dim());
        for (a, b) in self.0.iter_mut().zip(&x.0) {
            *a += alpha * b;
        }
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn normalized(&self) -> Option<VecN> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scaled(1.0 / n))
    }

    pub fn distance(&self, other: &VecN) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for VecN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &VecN {
    type Output = VecN;
    fn add(self, rhs: &VecN) -> VecN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VecN {
    type Output = VecN;
    fn sub(self, rhs: &VecN) -> VecN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &VecN {
    type Output = VecN;
    fn mul(self, rhs: f64) -> VecN {
        self.scaled(rhs)
    }
}

impl Neg for &VecN {
    type Output = VecN;
    fn neg(self) -> VecN {
        self.scaled(-1.0)
    }
}

/// Determinant of a square matrix given as rows, by partial-pivot elimination.
pub fn determinant(rows: &[VecN]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.as_slice().to_vec()).collect();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    det
}
