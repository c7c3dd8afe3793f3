//! Symmetric training algorithms behind a single [`fit`] entry point.
//!
//! Every algorithm sees its training set in a canonical order (sorted by
//! features, then response, then sequence index), so fitting is invariant to
//! the order in which points are supplied. Training on no concrete points
//! yields [`FittedPredictor::Dummy`], which predicts `⋆` everywhere.

mod count;
mod kernel;
mod knn;
mod mlp;
mod ridge;
mod stability;
mod tree;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{training_view, AugmentedPoint, LiftedCovariate, Observation};
use crate::error::{Error, Result};

pub use count::CountModel;
pub use kernel::KernelModel;
pub use knn::KnnModel;
pub use mlp::{MlpModel, MLP_EPOCHS, MLP_LEARNING_RATE};
pub use ridge::RidgeModel;
pub use stability::{estimate_oos_stability, StabilityEstimate, StabilitySource};
pub use tree::TreeModel;

/// A training algorithm and its hyperparameters.
///
/// The textual form used on the command line and in config files is
/// `ridge:<lambda>`, `knn:<k>`, `kernel:<bandwidth>`, `tree:<max_depth>:<min_leaf>`,
/// `mlp:<width>` or `count:<base>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PredictorSpec {
    Ridge { lambda: f64 },
    Knn { k: usize },
    Kernel { bandwidth: f64 },
    Tree { max_depth: usize, min_leaf: usize },
    Mlp { width: usize },
    CountFeature(Box<PredictorSpec>),
}

impl PredictorSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            PredictorSpec::Ridge { lambda } => lambda.is_finite() && *lambda >= 0.0,
            PredictorSpec::Knn { k } => *k >= 1,
            PredictorSpec::Kernel { bandwidth } => bandwidth.is_finite() && *bandwidth > 0.0,
            PredictorSpec::Tree { max_depth, min_leaf } => *max_depth >= 1 && *min_leaf >= 1,
            PredictorSpec::Mlp { width } => *width >= 1,
            PredictorSpec::CountFeature(base) => return base.validate(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("hyperparameter out of range in '{self}'")))
        }
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorSpec::Ridge { lambda } => write!(f, "ridge:{lambda}"),
            PredictorSpec::Knn { k } => write!(f, "knn:{k}"),
            PredictorSpec::Kernel { bandwidth } => write!(f, "kernel:{bandwidth}"),
            PredictorSpec::Tree { max_depth, min_leaf } => write!(f, "tree:{max_depth}:{min_leaf}"),
            PredictorSpec::Mlp { width } => write!(f, "mlp:{width}"),
            PredictorSpec::CountFeature(base) => write!(f, "count:{base}"),
        }
    }
}

impl FromStr for PredictorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse predictor '{s}'"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(':').collect() };
        let float = |i: usize, default: f64| -> Result<f64> {
            args.get(i).map_or(Ok(default), |a| a.parse().map_err(|_| bad()))
        };
        let int = |i: usize, default: usize| -> Result<usize> {
            args.get(i).map_or(Ok(default), |a| a.parse().map_err(|_| bad()))
        };
        let (spec, arity) = match name.to_ascii_lowercase().as_str() {
            "ridge" => (PredictorSpec::Ridge { lambda: float(0, 1.0)? }, 1),
            "knn" => (PredictorSpec::Knn { k: int(0, 10)? }, 1),
            "kernel" | "kr" => (PredictorSpec::Kernel { bandwidth: float(0, 0.5)? }, 1),
            "tree" | "dt" => (
                PredictorSpec::Tree {
                    max_depth: int(0, 5)?,
                    min_leaf: int(1, 2)?,
                },
                2,
            ),
            "mlp" => (PredictorSpec::Mlp { width: int(0, 20)? }, 1),
            "count" => {
                if rest.is_empty() {
                    return Err(bad());
                }
                (PredictorSpec::CountFeature(Box::new(rest.parse()?)), usize::MAX)
            }
            _ => return Err(bad()),
        };
        if args.len() > arity {
            return Err(bad());
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl TryFrom<String> for PredictorSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PredictorSpec> for String {
    fn from(spec: PredictorSpec) -> String {
        spec.to_string()
    }
}

/// A trained model. Immutable after fitting and safe to share across threads.
#[derive(Debug, Clone)]
pub enum FittedPredictor {
    /// Trained on no concrete points; predicts `⋆` everywhere.
    Dummy,
    Ridge(RidgeModel),
    Knn(KnnModel),
    Kernel(KernelModel),
    Tree(TreeModel),
    Mlp(MlpModel),
    Count(CountModel),
}

impl FittedPredictor {
    /// Predicts at a lifted covariate; `None` (the dummy `⋆`) maps to `None`.
    pub fn predict(&self, x: Option<&LiftedCovariate>) -> Result<Option<Vec<f64>>> {
        let Some(x) = x else { return Ok(None) };
        let out = match self {
            FittedPredictor::Dummy => return Ok(None),
            FittedPredictor::Count(m) => m.predict(x.current())?,
            other => other.predict_features(x.features())?,
        };
        Ok(Some(out))
    }

    /// Predicts at a point of the augmented space; a dummy point predicts `⋆`.
    pub fn predict_point(&self, z: &AugmentedPoint) -> Result<Option<Vec<f64>>> {
        self.predict(z.as_concrete().map(|o| &o.covariate))
    }

    pub(crate) fn predict_features(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            FittedPredictor::Dummy => Err(Error::invalid("dummy predictor has no feature space")),
            FittedPredictor::Ridge(m) => m.predict(x),
            FittedPredictor::Knn(m) => m.predict(x),
            FittedPredictor::Kernel(m) => m.predict(x),
            FittedPredictor::Tree(m) => m.predict(x),
            FittedPredictor::Mlp(m) => m.predict(x),
            FittedPredictor::Count(m) => m.predict(x),
        }
    }

    pub fn is_dummy(&self) -> bool {
        matches!(self, FittedPredictor::Dummy)
    }
}

/// Fits `spec` on the concrete points of `data`; dummy points are ignored.
pub fn fit(spec: &PredictorSpec, data: &[AugmentedPoint], seed: u64) -> Result<FittedPredictor> {
    fit_observations(spec, &training_view(data), seed)
}

/// Fits `spec` on a set of concrete observations.
pub fn fit_observations(spec: &PredictorSpec, data: &[&Observation], seed: u64) -> Result<FittedPredictor> {
    spec.validate()?;
    if data.is_empty() {
        return Ok(FittedPredictor::Dummy);
    }
    if let PredictorSpec::CountFeature(base) = spec {
        let rows = Row::canonical(data.iter().map(|o| Row {
            x: o.covariate.current().to_vec(),
            y: o.response.clone(),
            index: o.index,
        }))?;
        return Ok(FittedPredictor::Count(CountModel::fit(base, rows, seed)?));
    }
    let rows = Row::canonical(data.iter().map(|o| Row {
        x: o.covariate.features().to_vec(),
        y: o.response.clone(),
        index: o.index,
    }))?;
    fit_rows(spec, rows, seed)
}

/// Fits a non-count spec on rows that are already in canonical order.
pub(crate) fn fit_rows(spec: &PredictorSpec, rows: Vec<Row>, seed: u64) -> Result<FittedPredictor> {
    Ok(match spec {
        PredictorSpec::Ridge { lambda } => FittedPredictor::Ridge(RidgeModel::fit(&rows, *lambda)),
        PredictorSpec::Knn { k } => FittedPredictor::Knn(KnnModel::fit(rows, *k)),
        PredictorSpec::Kernel { bandwidth } => FittedPredictor::Kernel(KernelModel::fit(rows, *bandwidth)),
        PredictorSpec::Tree { max_depth, min_leaf } => {
            FittedPredictor::Tree(TreeModel::fit(&rows, *max_depth, *min_leaf))
        }
        PredictorSpec::Mlp { width } => FittedPredictor::Mlp(MlpModel::fit(&rows, *width, seed)),
        PredictorSpec::CountFeature(base) => FittedPredictor::Count(CountModel::fit(base, rows, seed)?),
    })
}

/// One training pair in feature space.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub index: usize,
}

impl Row {
    /// Collects rows, checks dimensions and sorts them canonically.
    pub fn canonical(rows: impl IntoIterator<Item = Row>) -> Result<Vec<Row>> {
        let mut rows: Vec<Row> = rows.into_iter().collect();
        if let Some(first) = rows.first() {
            let (dx, dy) = (first.x.len(), first.y.len());
            for r in &rows {
                if r.x.len() != dx {
                    return Err(Error::DimensionMismatch { expected: dx, got: r.x.len() });
                }
                if r.y.len() != dy {
                    return Err(Error::DimensionMismatch { expected: dy, got: r.y.len() });
                }
            }
        }
        rows.sort_by(Row::canonical_cmp);
        Ok(rows)
    }

    fn canonical_cmp(a: &Row, b: &Row) -> Ordering {
        lex_cmp(&a.x, &b.x)
            .then_with(|| lex_cmp(&a.y, &b.y))
            .then(a.index.cmp(&b.index))
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got: x.len() })
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Mean response of a set of rows.
pub(crate) fn mean_response<'a>(rows: impl IntoIterator<Item = &'a Row>, dy: usize) -> Vec<f64> {
    let mut acc = vec![0.0; dy];
    let mut count = 0usize;
    for r in rows {
        for (a, v) in acc.iter_mut().zip(&r.y) {
            *a += v;
        }
        count += 1;
    }
    if count > 0 {
        for a in &mut acc {
            *a /= count as f64;
        }
    }
    acc
}
