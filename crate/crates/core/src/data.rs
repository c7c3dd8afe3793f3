//! Sequences, memory-`L` lifting and the masking operator.
//!
//! Indices in this module follow two conventions. Public positions such as
//! [`Observation::index`] and the `k` of [`mask`] are 1-based over the lifted
//! sequence; slices handed back by helpers like [`masked_range`] are ordinary
//! 0-based Rust ranges.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A raw multivariate series `(X_i, Y_i)`.
///
/// `d_x = 0` is the autoregressive mode: the covariate carries no
/// information beyond the lagged responses that lifting attaches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSeries {
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
    /// Label of the first observation. Metadata only.
    pub start_index: i64,
}

impl RawSeries {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>, start_index: i64) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::Empty("raw series"));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                got: x.len(),
            });
        }
        check_uniform(&x)?;
        check_uniform(&y)?;
        Ok(Self { x, y, start_index })
    }

    /// Autoregressive series: `d_x = 0` with scalar responses `w`.
    pub fn autoregressive(w: &[f64], start_index: i64) -> Result<Self> {
        Self::new(
            vec![Vec::new(); w.len()],
            w.iter().map(|&v| vec![v]).collect(),
            start_index,
        )
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x_dim(&self) -> usize {
        self.x[0].len()
    }

    pub fn y_dim(&self) -> usize {
        self.y[0].len()
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn y(&self) -> &[Vec<f64>] {
        &self.y
    }
}

fn check_uniform(rows: &[Vec<f64>]) -> Result<()> {
    let d = rows[0].len();
    match rows.iter().find(|r| r.len() != d) {
        Some(r) => Err(Error::DimensionMismatch {
            expected: d,
            got: r.len(),
        }),
        None => Ok(()),
    }
}

/// A lifted covariate `((X_{t-L}, Y_{t-L}), ..., (X_{t-1}, Y_{t-1}), X_t)`,
/// stored flattened in exactly that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedCovariate {
    features: Vec<f64>,
    memory: usize,
    x_dim: usize,
    y_dim: usize,
}

impl LiftedCovariate {
    /// A memoryless covariate (`L = 0`).
    pub fn plain(x: Vec<f64>) -> Self {
        let x_dim = x.len();
        Self {
            features: x,
            memory: 0,
            x_dim,
            y_dim: 0,
        }
    }

    /// Builds a covariate from already-flattened features.
    pub fn from_features(features: Vec<f64>, memory: usize, x_dim: usize, y_dim: usize) -> Result<Self> {
        let expected = memory * (x_dim + y_dim) + x_dim;
        if features.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: features.len(),
            });
        }
        Ok(Self {
            features,
            memory,
            x_dim,
            y_dim,
        })
    }

    /// The flattened feature vector used by every predictor.
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// The `L` lagged `(covariate, response)` pairs, oldest first.
    pub fn history(&self) -> impl ExactSizeIterator<Item = (&[f64], &[f64])> + '_ {
        let stride = self.x_dim + self.y_dim;
        (0..self.memory).map(move |j| {
            let block = &self.features[j * stride..(j + 1) * stride];
            block.split_at(self.x_dim)
        })
    }

    /// The current covariate `X_t`.
    pub fn current(&self) -> &[f64] {
        &self.features[self.memory * (self.x_dim + self.y_dim)..]
    }
}

/// A concrete time step: lifted covariate and response, tagged with its
/// 1-based position in the lifted sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub index: usize,
    pub covariate: LiftedCovariate,
    pub response: Vec<f64>,
}

/// One element of the augmented data space: a concrete point or the dummy `⋆`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AugmentedPoint {
    Concrete(Observation),
    Dummy,
}

impl AugmentedPoint {
    pub fn is_dummy(&self) -> bool {
        matches!(self, AugmentedPoint::Dummy)
    }

    pub fn as_concrete(&self) -> Option<&Observation> {
        match self {
            AugmentedPoint::Concrete(o) => Some(o),
            AugmentedPoint::Dummy => None,
        }
    }
}

/// The sequence `Z = (Z_1, ..., Z_m)` consumed by every method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedSequence {
    pub points: Vec<AugmentedPoint>,
    pub memory: usize,
    /// Raw-series label of the first lifted point. Metadata only.
    pub origin: i64,
}

impl LiftedSequence {
    /// Wraps memoryless `(x, y)` pairs as a lifted sequence with `L = 0`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Vec<f64>, Vec<f64>)>) -> Self {
        let points = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (x, y))| {
                AugmentedPoint::Concrete(Observation {
                    index: i + 1,
                    covariate: LiftedCovariate::plain(x),
                    response: y,
                })
            })
            .collect();
        Self {
            points,
            memory: 0,
            origin: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The 1-based point `Z_i`.
    pub fn get(&self, i: usize) -> Option<&AugmentedPoint> {
        i.checked_sub(1).and_then(|j| self.points.get(j))
    }

    /// The first `n` points, `Z_{1:n}`.
    pub fn prefix(&self, n: usize) -> LiftedSequence {
        LiftedSequence {
            points: self.points[..n.min(self.points.len())].to_vec(),
            memory: self.memory,
            origin: self.origin,
        }
    }

    /// Response dimension of the first concrete point, if any.
    pub fn response_dim(&self) -> Option<usize> {
        self.points
            .iter()
            .find_map(|p| p.as_concrete().map(|o| o.response.len()))
    }
}

/// Lifts a raw series with memory `L`, producing `T - L` points.
pub fn lift(raw: &RawSeries, memory: usize) -> Result<LiftedSequence> {
    let t = raw.len();
    if t <= memory {
        return Err(Error::SeriesShorterThanMemory { len: t, memory });
    }
    let (dx, dy) = (raw.x_dim(), raw.y_dim());
    let points = (memory..t)
        .map(|s| {
            let mut features = Vec::with_capacity(memory * (dx + dy) + dx);
            for j in s - memory..s {
                features.extend_from_slice(&raw.x[j]);
                features.extend_from_slice(&raw.y[j]);
            }
            features.extend_from_slice(&raw.x[s]);
            AugmentedPoint::Concrete(Observation {
                index: s - memory + 1,
                covariate: LiftedCovariate {
                    features,
                    memory,
                    x_dim: dx,
                    y_dim: dy,
                },
                response: raw.y[s].clone(),
            })
        })
        .collect();
    Ok(LiftedSequence {
        points,
        memory,
        origin: raw.start_index + memory as i64,
    })
}

/// Maps a masking offset onto its canonical representative in `{-tau, ..., m-1}`.
pub fn canonical_offset(m: usize, k: i64, tau: usize) -> i64 {
    let (m, tau) = (m as i64, tau as i64);
    (k + tau).rem_euclid(m + tau) - tau
}

/// The 0-based positions replaced by `⋆` under `M_{k,tau}` on a length-`m` sequence.
pub fn masked_range(m: usize, k: i64, tau: usize) -> Result<Range<usize>> {
    if tau >= m {
        return Err(Error::WindowExceedsSequence { tau, len: m });
    }
    let k = canonical_offset(m, k, tau);
    // Masked 1-based positions are k+1..=k+tau, i.e. 0-based k..k+tau, clipped to [0, m).
    let start = k.max(0) as usize;
    let end = ((k + tau as i64).max(0) as usize).min(m);
    Ok(start..end.max(start))
}

/// Applies `M_{k,tau}` to any slice, replacing the window with `dummy`.
pub fn mask_with<T: Clone>(items: &[T], k: i64, tau: usize, dummy: T) -> Result<Vec<T>> {
    let range = masked_range(items.len(), k, tau)?;
    let mut out = items.to_vec();
    for slot in &mut out[range] {
        *slot = dummy.clone();
    }
    Ok(out)
}

/// The masking operator `M_{k,tau}` on a lifted sequence.
///
/// Retained points keep their full lifted covariates, including lagged values
/// that fall inside the window.
pub fn mask(seq: &LiftedSequence, k: i64, tau: usize) -> Result<LiftedSequence> {
    Ok(LiftedSequence {
        points: mask_with(&seq.points, k, tau, AugmentedPoint::Dummy)?,
        memory: seq.memory,
        origin: seq.origin,
    })
}

/// The concrete points of a sequence in order; dummies are dropped.
pub fn training_view(points: &[AugmentedPoint]) -> Vec<&Observation> {
    points.iter().filter_map(AugmentedPoint::as_concrete).collect()
}
