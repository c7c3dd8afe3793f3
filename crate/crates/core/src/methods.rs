//! Split conformal prediction, the vanilla jackknife and leave-a-window-out.
//!
//! All three take a sequence `(Z_1, ..., Z_{n+1})`. Only the covariate of the
//! final point is used; its response, when present, is left for the caller to
//! check coverage against.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{training_view, AugmentedPoint, LiftedSequence, Observation};
use crate::error::{Error, Result};
use crate::predictors::{fit_observations, FittedPredictor, PredictorSpec};
use crate::score::{quantile, score, ExtendedReal, PredictionRegion, ScoreKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LwoResult {
    pub region: PredictionRegion,
    /// `s_1, ..., s_n`.
    pub scores: Vec<f64>,
    /// `Quantile_{1-α}(s) + inflation`; equal to `region.radius`.
    pub threshold: ExtendedReal,
    pub tau: usize,
    pub inflation: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn point_score(f: &FittedPredictor, z: &AugmentedPoint, kind: ScoreKind) -> Result<f64> {
    let yhat = f.predict_point(z)?;
    score(z.as_concrete().map(|o| o.response.as_slice()), yhat.as_deref(), kind)
}

fn region(f: &FittedPredictor, test: &AugmentedPoint, radius: ExtendedReal, kind: ScoreKind) -> Result<PredictionRegion> {
    Ok(PredictionRegion {
        center: f.predict_point(test)?,
        radius,
        kind,
    })
}

/// Leave-a-window-out prediction region.
///
/// Score `s_k` comes from a model trained on `Z_{1:n}` without the window
/// `{k, ..., min(k+tau, n)}`; the region is centered at the full-data
/// prediction with radius `Quantile_{1-α}(s) + inflation`. Windows are never
/// wrapped, so for `k ≥ n - tau` the model only sees the pre-window points.
/// The `n` window fits run in parallel and share `seed`.
pub fn lwo(
    seq: &LiftedSequence,
    alpha: f64,
    tau: usize,
    spec: &PredictorSpec,
    kind: ScoreKind,
    inflation: f64,
    seed: u64,
) -> Result<LwoResult> {
    check_alpha(alpha)?;
    if !(inflation >= 0.0 && inflation.is_finite()) {
        return Err(Error::invalid(format!("inflation must be a finite nonnegative number, got {inflation}")));
    }
    let n = seq.len().saturating_sub(1);
    if n <= tau {
        return Err(Error::WindowTooLarge { n, tau });
    }
    let train = &seq.points[..n];
    let scores = (1..=n)
        .into_par_iter()
        .map(|k| {
            let window_end = (k + tau).min(n);
            let kept: Vec<&Observation> = training_view(&train[..k - 1])
                .into_iter()
                .chain(training_view(&train[window_end..]))
                .collect();
            let f = fit_observations(spec, &kept, seed)?;
            point_score(&f, &train[k - 1], kind)
        })
        .collect::<Result<Vec<f64>>>()?;
    let full = fit_observations(spec, &training_view(train), seed)?;
    let threshold = quantile(&scores, 1.0 - alpha)?.plus(inflation);
    Ok(LwoResult {
        region: region(&full, &seq.points[n], threshold, kind)?,
        scores,
        threshold,
        tau,
        inflation,
    })
}

/// The vanilla jackknife: LWO with `tau = 0` and no inflation.
pub fn jackknife(seq: &LiftedSequence, alpha: f64, spec: &PredictorSpec, kind: ScoreKind, seed: u64) -> Result<LwoResult> {
    lwo(seq, alpha, 0, spec, kind, 0.0, seed)
}

/// Split conformal prediction: train on the first `⌊n/2⌋` points, calibrate on
/// the remaining `n - ⌊n/2⌋`.
pub fn split_cp(
    seq: &LiftedSequence,
    alpha: f64,
    spec: &PredictorSpec,
    kind: ScoreKind,
    seed: u64,
) -> Result<PredictionRegion> {
    check_alpha(alpha)?;
    let n = seq.len().saturating_sub(1);
    if n < 2 {
        return Err(Error::invalid(format!("split conformal needs n >= 2, got {n}")));
    }
    let half = n / 2;
    let f = fit_observations(spec, &training_view(&seq.points[..half]), seed)?;
    let scores = seq.points[half..n]
        .iter()
        .map(|z| point_score(&f, z, kind))
        .collect::<Result<Vec<f64>>>()?;
    region(&f, &seq.points[n], quantile(&scores, 1.0 - alpha)?, kind)
}
