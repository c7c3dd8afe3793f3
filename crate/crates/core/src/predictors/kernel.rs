//! Nadaraya-Watson regression with a Gaussian kernel.

use super::{check_dim, mean_response, sq_dist, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct KernelModel {
    rows: Vec<Row>,
    bandwidth: f64,
    fallback: Vec<f64>,
}

impl KernelModel {
    pub(crate) fn fit(rows: Vec<Row>, bandwidth: f64) -> Self {
        let fallback = mean_response(&rows, rows[0].y.len());
        Self { rows, bandwidth, fallback }
    }

    /// Weighted mean of training responses with weights `exp(-‖x - x_i‖² / 2h²)`.
    ///
    /// When every weight underflows to zero the training-response mean is returned.
    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.rows[0].x.len(), x)?;
        let scale = 2.0 * self.bandwidth * self.bandwidth;
        let mut acc = vec![0.0; self.fallback.len()];
        let mut mass = 0.0;
        for r in &self.rows {
            let w = (-sq_dist(&r.x, x) / scale).exp();
            if w > 0.0 {
                mass += w;
                for (a, v) in acc.iter_mut().zip(&r.y) {
                    *a += w * v;
                }
            }
        }
        if mass > 0.0 && mass.is_finite() {
            Ok(acc.into_iter().map(|a| a / mass).collect())
        } else {
            Ok(self.fallback.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_follow_gaussian_kernel() {
        let rows = vec![Row { x: vec![0.0], y: vec![0.0], index: 1 }, Row { x: vec![1.0], y: vec![1.0], index: 2 }];
        let m = KernelModel::fit(rows, 1.0);
        // Query at 0: weights 1 and e^{-1/2}.
        let w = (-0.5f64).exp();
        assert!((m.predict(&[0.0]).unwrap()[0] - w / (1.0 + w)).abs() < 1e-15);
    }

    #[test]
    fn far_query_falls_back_to_mean() {
        let rows = vec![Row { x: vec![0.0], y: vec![2.0], index: 1 }, Row { x: vec![1.0], y: vec![4.0], index: 2 }];
        let m = KernelModel::fit(rows, 0.01);
        assert_eq!(m.predict(&[1e6]).unwrap(), vec![3.0]);
    }
}
