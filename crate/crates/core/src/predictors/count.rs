//! Count-feature composition: a base predictor fitted on how many training
//! points share each raw covariate value.

use std::collections::HashMap;

use super::{check_dim, fit_rows, FittedPredictor, PredictorSpec, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct CountModel {
    counts: HashMap<Vec<u64>, usize>,
    x_dim: usize,
    base: Box<FittedPredictor>,
}

fn key(x: &[f64]) -> Vec<u64> {
    x.iter().map(|v| v.to_bits()).collect()
}

impl CountModel {
    /// `rows` carry the raw current covariate in `x`.
    pub(crate) fn fit(base: &PredictorSpec, rows: Vec<Row>, seed: u64) -> Result<Self> {
        let x_dim = rows[0].x.len();
        let mut counts: HashMap<Vec<u64>, usize> = HashMap::new();
        for r in &rows {
            *counts.entry(key(&r.x)).or_default() += 1;
        }
        let featurized = Row::canonical(rows.into_iter().map(|r| Row {
            x: vec![counts[&key(&r.x)] as f64],
            y: r.y,
            index: r.index,
        }))?;
        Ok(Self {
            base: Box::new(fit_rows(base, featurized, seed)?),
            counts,
            x_dim,
        })
    }

    /// Number of training points whose raw covariate equals `x` bit for bit.
    pub fn count(&self, x: &[f64]) -> usize {
        self.counts.get(&key(x)).copied().unwrap_or(0)
    }

    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.x_dim, x)?;
        self.base.predict_features(&[self.count(x) as f64])
    }
}
