//! Monte-Carlo estimate of out-of-sample stability under block deletion.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use super::{fit, PredictorSpec};
use crate::data::{mask, LiftedSequence};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::score::{score, ScoreKind};

/// Where the sequences `(Z_1, ..., Z_{n+1})` come from.
pub enum StabilitySource<'a> {
    /// One fixed sequence; only the deleted block is resampled.
    Fixed(&'a LiftedSequence),
    /// A fresh sequence per trial, generated from the given seed.
    Generator(&'a (dyn Fn(u64) -> Result<LiftedSequence> + Sync)),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityEstimate {
    /// Fraction of trials where the test score moved by more than `t`.
    pub nu_hat: f64,
    pub exceedances: usize,
    pub trials: usize,
    /// `√(ν̂(1-ν̂)/trials)`.
    pub std_error: f64,
}

/// Estimates `P{|s(M_{K,ℓ}) - s(full)| > t}` for `K ~ Unif{1-ℓ, ..., n-ℓ}`,
/// where `s(·)` is the test-point score of the predictor trained on the first
/// `n` points (masked or not) and the test point is the last point.
pub fn estimate_oos_stability(
    spec: &PredictorSpec,
    source: StabilitySource<'_>,
    ell: usize,
    t: f64,
    kind: ScoreKind,
    trials: usize,
    seed: u64,
) -> Result<StabilityEstimate> {
    if trials == 0 {
        return Err(Error::invalid("stability estimate needs at least one trial"));
    }
    if ell == 0 {
        return Err(Error::invalid("block length must be positive"));
    }
    let fit_seed = derive_seed(seed, u64::MAX);
    let exceedances = match source {
        StabilitySource::Fixed(seq) => {
            let probe = Probe::new(spec, seq, ell, kind, fit_seed)?;
            let mut cache: HashMap<i64, bool> = HashMap::new();
            let mut count = 0;
            for i in 0..trials {
                let k = probe.draw_k(derive_seed(seed, i as u64));
                let moved = match cache.get(&k) {
                    Some(&m) => m,
                    None => {
                        let m = probe.change(k)? > t;
                        cache.insert(k, m);
                        m
                    }
                };
                count += usize::from(moved);
            }
            count
        }
        StabilitySource::Generator(generate) => {
            let flags = (0..trials)
                .into_par_iter()
                .map(|i| -> Result<bool> {
                    let trial_seed = derive_seed(seed, i as u64);
                    let seq = generate(derive_seed(trial_seed, 0))?;
                    let probe = Probe::new(spec, &seq, ell, kind, fit_seed)?;
                    Ok(probe.change(probe.draw_k(trial_seed))? > t)
                })
                .collect::<Result<Vec<bool>>>()?;
            flags.into_iter().filter(|&m| m).count()
        }
    };
    let nu_hat = exceedances as f64 / trials as f64;
    Ok(StabilityEstimate {
        nu_hat,
        exceedances,
        trials,
        std_error: (nu_hat * (1.0 - nu_hat) / trials as f64).sqrt(),
    })
}

struct Probe<'a> {
    spec: &'a PredictorSpec,
    train: LiftedSequence,
    test: &'a crate::data::AugmentedPoint,
    ell: usize,
    kind: ScoreKind,
    fit_seed: u64,
    full_score: f64,
}

impl<'a> Probe<'a> {
    fn new(spec: &'a PredictorSpec, seq: &'a LiftedSequence, ell: usize, kind: ScoreKind, fit_seed: u64) -> Result<Self> {
        let n = seq.len().saturating_sub(1);
        if ell >= n {
            return Err(Error::WindowExceedsSequence { tau: ell, len: n });
        }
        let train = seq.prefix(n);
        let test = &seq.points[n];
        let full = fit(spec, &train.points, fit_seed)?;
        let full_score = test_score(&full, test, kind)?;
        Ok(Self { spec, train, test, ell, kind, fit_seed, full_score })
    }

    fn draw_k(&self, seed: u64) -> i64 {
        let n = self.train.len() as i64;
        let ell = self.ell as i64;
        rng_from_seed(seed).random_range(1 - ell..=n - ell)
    }

    fn change(&self, k: i64) -> Result<f64> {
        let masked = mask(&self.train, k, self.ell)?;
        let f = fit(self.spec, &masked.points, self.fit_seed)?;
        Ok((test_score(&f, self.test, self.kind)? - self.full_score).abs())
    }
}

fn test_score(f: &super::FittedPredictor, z: &crate::data::AugmentedPoint, kind: ScoreKind) -> Result<f64> {
    let yhat = f.predict_point(z)?;
    let y = z.as_concrete().map(|o| o.response.as_slice());
    score(y, yhat.as_deref(), kind)
}
