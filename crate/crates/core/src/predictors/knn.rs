//! k-nearest-neighbor regression with exact search.

use super::{check_dim, sq_dist, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct KnnModel {
    rows: Vec<Row>,
    k: usize,
}

impl KnnModel {
    pub(crate) fn fit(rows: Vec<Row>, k: usize) -> Self {
        Self { rows, k }
    }

    /// Mean response of the `k` nearest training points in Euclidean distance.
    /// Equal distances are resolved in favor of the earlier sequence index.
    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.rows[0].x.len(), x)?;
        Ok(super::mean_response(self.neighbors(x).into_iter().map(|i| &self.rows[i]), self.rows[0].y.len()))
    }

    /// Positions (into the canonical row order) of the nearest neighbors of `x`,
    /// nearest first.
    pub(crate) fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let mut keyed: Vec<(f64, usize, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(pos, r)| (sq_dist(&r.x, x), r.index, pos))
            .collect();
        let k = self.k.min(keyed.len());
        let cmp = |a: &(f64, usize, usize), b: &(f64, usize, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < keyed.len() {
            keyed.select_nth_unstable_by(k - 1, cmp);
            keyed.truncate(k);
        }
        keyed.sort_by(cmp);
        keyed.into_iter().map(|(_, _, pos)| pos).collect()
    }
}
