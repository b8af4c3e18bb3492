use super::vector::{determinant, VecN};
use crate::error::{Error, Result};

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual norm after projection does not exceed `tol` are
/// dropped; the returned rank equals the length of the returned list.
pub fn gram_schmidt(vectors: &[VecN], tol: f64) -> Result<(Vec<VecN>, usize)> {
    let Some(first) = vectors.first() else {
        return Ok((Vec::new(), 0));
    };
    let dim = first.dim();
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    if !(tol > 0.0) {
        return Err(Error::BadParams(format!("tolerance must be positive, got {tol}")));
    }
    if first.norm() < tol {
        return Err(Error::DegenerateInput);
    }

    let mut basis: Vec<VecN> = Vec::with_capacity(vectors.len().min(dim));
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for e in &basis {
                let c = w.dot(e);
                w.axpy(-c, e);
            }
        }
        let r = w.norm();
        if r > tol {
            basis.push(w.scaled(1.0 / r));
        }
    }
    let rank = basis.len();
    Ok((basis, rank))
}

/// Unit vector orthogonal to every vector in `orthonormal`, which must hold
/// exactly `dim - 1` orthonormal vectors of dimension `dim`.
///
/// The sign is chosen so that the rows `[orthonormal..., result]` have
/// positive determinant.
pub fn complete_orientation(orthonormal: &[VecN]) -> VecN {
    let dim = orthonormal[0].dim();
    debug_assert_eq!(orthonormal.len() + 1, dim);

    // Project each coordinate axis out of the span; keep the largest residual.
    let mut best = VecN::zeros(dim);
    let mut best_norm = -1.0;
    for axis in 0..dim {
        let mut w = VecN::basis(dim, axis);
        for _pass in 0..2 {
            for e in orthonormal {
                let c = w.dot(e);
                w.axpy(-c, e);
            }
        }
        let r = w.norm();
        if r > best_norm {
            best_norm = r;
            best = w;
        }
    }
    let mut u = best.scaled(1.0 / best_norm);

    let mut rows = orthonormal.to_vec();
    rows.push(u.clone());
    if determinant(&rows) < 0.0 {
        u = -&u;
    }
    u
}
