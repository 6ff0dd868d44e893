//! Dense least-squares helpers shared by the readout and network trainers.

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

pub struct LeastSquares {
    pub solution: DVector<f64>,
    /// Set when the minimum-norm pseudo-inverse solution was used.
    pub min_norm_fallback: bool,
}

/// `argmin ‖X w − y‖² + λ‖w‖²`.
///
/// λ > 0 goes through a Cholesky factorization of the regularized normal
/// equations. λ = 0, or a failed factorization, uses the SVD pseudo-inverse,
/// which yields the minimum-norm solution when `X` is rank deficient.
pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<LeastSquares> {
    if lambda > 0.0 {
        let xt = x.transpose();
        let mut a = &xt * x;
        for i in 0..a.nrows() {
            a[(i, i)] += lambda;
        }
        let b = &xt * y;
        if let Some(ch) = a.cholesky() {
            return Ok(LeastSquares {
                solution: ch.solve(&b),
                min_norm_fallback: false,
            });
        }
    }
    let (solution, rank_deficient) = min_norm(x.clone(), y)?;
    Ok(LeastSquares {
        solution,
        min_norm_fallback: lambda > 0.0 || rank_deficient,
    })
}

fn min_norm(x: DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, bool)> {
    let (r, c) = x.shape();
    let svd = SVD::new(x, true, true);
    let smax = svd.singular_values.max();
    let eps = smax * r.max(c) as f64 * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let w = svd
        .solve(y, eps)
        .map_err(|e| Error::TrainingDiverged(format!("pseudo-inverse failed: {e}")))?;
    Ok((w, rank < c))
}
