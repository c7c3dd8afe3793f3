//! Ridge regression without intercept, solved through the normal equations.

use nalgebra::DMatrix;

use super::{check_dim, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct RidgeModel {
    /// `p × q` coefficient matrix.
    coef: DMatrix<f64>,
}

impl RidgeModel {
    /// Solves `(XᵀX + λI) B = XᵀY` by Cholesky, falling back to an SVD
    /// least-squares solve when the system is singular (only possible at `λ = 0`).
    pub(crate) fn fit(rows: &[Row], lambda: f64) -> Self {
        let (n, p, q) = (rows.len(), rows[0].x.len(), rows[0].y.len());
        let x = DMatrix::from_fn(n, p, |i, j| rows[i].x[j]);
        let y = DMatrix::from_fn(n, q, |i, j| rows[i].y[j]);
        let mut gram = x.tr_mul(&x);
        for j in 0..p {
            gram[(j, j)] += lambda;
        }
        let rhs = x.tr_mul(&y);
        let coef = match gram.clone().cholesky() {
            Some(chol) => chol.solve(&rhs),
            None => gram
                .svd(true, true)
                .solve(&rhs, 1e-12)
                .unwrap_or_else(|_| DMatrix::zeros(p, q)),
        };
        Self { coef }
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coef
    }

    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.coef.nrows(), x)?;
        Ok(self
            .coef
            .column_iter()
            .map(|col| col.iter().zip(x).map(|(b, v)| b * v).sum())
            .collect())
    }
}
