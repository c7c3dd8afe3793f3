//! Trial execution and the per-trial CSV record format.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Method, ProcessSpec};
use crate::data::{lift, LiftedSequence};
use crate::error::{Error, Result};
use crate::methods::{jackknife, lwo, split_cp};
use crate::processes::{gen_iid_linear, gen_ma1, gen_sticky_chain, ingest_csv};
use crate::rng::derive_seed;
use crate::score::{ExtendedReal, PredictionRegion};

pub const RECORD_HEADER: [&str; 7] = ["method", "predictor", "trial", "seed", "covered", "radius", "wall_ms"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub method: Method,
    pub predictor: String,
    pub trial: usize,
    pub seed: u64,
    pub covered: bool,
    pub radius: ExtendedReal,
    pub wall_ms: f64,
}

/// The `n + 1` lifted points of one synthetic trial.
pub fn trial_sequence(cfg: &ExperimentConfig, seed: u64) -> Result<LiftedSequence> {
    let len = cfg.n + 1 + cfg.memory;
    let raw = match &cfg.process {
        ProcessSpec::Ma1 { dim } => gen_ma1(*dim, len, seed)?,
        ProcessSpec::Sticky { rho } => gen_sticky_chain(*rho, len, seed)?,
        ProcessSpec::IidLinear { dim } => gen_iid_linear(*dim, len, seed)?,
        ProcessSpec::Csv { .. } => return Err(Error::invalid("csv data is read in chunks, not generated")),
    };
    lift(&raw, cfg.memory)
}

fn evaluate(cfg: &ExperimentConfig, seq: &LiftedSequence, trial: usize, seed: u64) -> Result<Vec<TrialRecord>> {
    let test = seq
        .points
        .last()
        .and_then(|p| p.as_concrete())
        .ok_or_else(|| Error::Data(format!("trial {trial}: test point has no response")))?;
    let fit_seed = derive_seed(seed, 1);
    let mut out = Vec::with_capacity(cfg.predictors.len() * cfg.methods.len());
    for spec in &cfg.predictors {
        for &method in &cfg.methods {
            let start = Instant::now();
            let region: PredictionRegion = match method {
                Method::Split => split_cp(seq, cfg.alpha, spec, cfg.score, fit_seed)?,
                Method::Jackknife => jackknife(seq, cfg.alpha, spec, cfg.score, fit_seed)?.region,
                Method::Lwo => lwo(seq, cfg.alpha, cfg.tau, spec, cfg.score, cfg.inflation, fit_seed)?.region,
            };
            let covered = region.contains(&test.response)?;
            out.push(TrialRecord {
                method,
                predictor: spec.to_string(),
                trial,
                seed,
                covered,
                radius: region.radius,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(out)
}

/// Runs every method × predictor on each trial's data. Trial `i` uses seed
/// `derive_seed(cfg.seed, i)`; all methods see the same data. Records are
/// ordered by trial, then predictor, then method, as listed in `cfg`.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = match &cfg.process {
        ProcessSpec::Csv { path, column, gap } => {
            let chunks = ingest_csv(path, *column, cfg.memory, cfg.n, *gap)?;
            if chunks.len() < cfg.trials {
                log::warn!("{} holds {} chunks; running {} of {} trials", path.display(), chunks.len(), chunks.len(), cfg.trials);
            }
            chunks
                .par_iter()
                .take(cfg.trials)
                .enumerate()
                .map(|(i, c)| evaluate(cfg, &c.sequence, i, derive_seed(cfg.seed, i as u64)))
                .collect::<Result<_>>()?
        }
        _ => (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(cfg.seed, i as u64);
                evaluate(cfg, &trial_sequence(cfg, seed)?, i, seed)
            })
            .collect::<Result<_>>()?,
    };
    Ok(per_trial.into_iter().flatten().collect())
}

/// Writes records as CSV with [`RECORD_HEADER`]; infinite radii print as `inf`.
pub fn write_records<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Data(format!("writing records: {e}"));
    w.write_record(RECORD_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.method.to_string(),
            r.predictor.clone(),
            r.trial.to_string(),
            r.seed.to_string(),
            u8::from(r.covered).to_string(),
            r.radius.to_string(),
            format!("{:.3}", r.wall_ms),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
