//! Conformity scores, empirical quantiles and prediction regions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance used to score a response against a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    /// `|y - ŷ|`, scalar responses only.
    AbsoluteResidual,
    /// `‖y - ŷ‖₂`, any response dimension.
    EuclideanNorm,
}

impl FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abs" | "absolute" | "absolute_residual" => Ok(ScoreKind::AbsoluteResidual),
            "l2" | "euclidean" | "euclidean_norm" => Ok(ScoreKind::EuclideanNorm),
            other => Err(Error::invalid(format!("unknown score kind '{other}'"))),
        }
    }
}

/// A real number or `±∞`. Variant order gives the ordering:
/// `NegInfinite < Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum ExtendedReal {
    NegInfinite,
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// The value as an `f64`, with `±∞` mapped to the float infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinite => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite | ExtendedReal::NegInfinite => None,
        }
    }

    pub fn plus(self, t: f64) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + t),
            inf => inf,
        }
    }

    /// `value ≤ self`.
    pub fn admits(self, value: f64) -> bool {
        match self {
            ExtendedReal::Finite(v) => value <= v,
            ExtendedReal::Infinite => true,
            ExtendedReal::NegInfinite => false,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => f.write_str("inf"),
            ExtendedReal::NegInfinite => f.write_str("-inf"),
        }
    }
}

/// The set `{y : score(y, center) ≤ radius}`.
///
/// A `None` center is the dummy prediction `⋆`. Every score against `⋆` is
/// zero, so such a region contains every response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRegion {
    pub center: Option<Vec<f64>>,
    pub radius: ExtendedReal,
    pub kind: ScoreKind,
}

impl PredictionRegion {
    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        region_contains(self, y)
    }
}

/// Scores a response against a prediction. `None` stands for `⋆` on either side.
pub fn score(y: Option<&[f64]>, yhat: Option<&[f64]>, kind: ScoreKind) -> Result<f64> {
    let (Some(y), Some(yhat)) = (y, yhat) else {
        return Ok(0.0);
    };
    if y.len() != yhat.len() {
        return Err(Error::DimensionMismatch {
            expected: yhat.len(),
            got: y.len(),
        });
    }
    match kind {
        ScoreKind::AbsoluteResidual => {
            if y.len() != 1 {
                return Err(Error::invalid(format!(
                    "absolute residual needs scalar responses, got dimension {}",
                    y.len()
                )));
            }
            Ok((y[0] - yhat[0]).abs())
        }
        ScoreKind::EuclideanNorm => Ok(y
            .iter()
            .zip(yhat)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()),
    }
}

/// Order-statistic rank `⌈level·m⌉`.
///
/// Products within a relative `1e-9` of an integer are snapped to it first, so
/// a level like `1 - 0.1` times `m = 10` gives rank 9 and not 10.
pub fn quantile_rank(level: f64, m: usize) -> i64 {
    let x = level * m as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as i64
    } else {
        x.ceil() as i64
    }
}

/// Empirical quantile: the `⌈level·m⌉`-th smallest entry of `v`.
///
/// Ranks above `m` give `+∞` and ranks at or below zero give `-∞`, so the
/// order statistic `v_(k)` is monotone in `k` over all integers.
pub fn quantile(v: &[f64], level: f64) -> Result<ExtendedReal> {
    if v.is_empty() {
        return Err(Error::Empty("quantile input"));
    }
    let m = v.len();
    let k = quantile_rank(level, m);
    if k > m as i64 {
        return Ok(ExtendedReal::Infinite);
    }
    if k <= 0 {
        return Ok(ExtendedReal::NegInfinite);
    }
    let k = k as usize;
    let mut sorted = v.to_vec();
    let (_, kth, _) = sorted.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(ExtendedReal::Finite(*kth))
}

pub fn region_contains(r: &PredictionRegion, y: &[f64]) -> Result<bool> {
    if let Some(c) = &r.center {
        if c.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                got: y.len(),
            });
        }
    }
    if r.radius == ExtendedReal::Infinite {
        return Ok(true);
    }
    let s = score(Some(y), r.center.as_deref(), r.kind)?;
    Ok(r.radius.admits(s))
}
