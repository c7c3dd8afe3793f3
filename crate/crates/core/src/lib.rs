//! Predictive inference for dependent sequences.
//!
//! The crate implements three wrappers around an arbitrary symmetric
//! regression algorithm:
//!
//! * split conformal prediction,
//! * the vanilla (leave-one-out) jackknife,
//! * leave-a-window-out (LWO), which scores each training point with a model
//!   that never saw the `tau` points following it.
//!
//! Alongside the methods live the pieces needed to study them: memory-`L`
//! lifting and masking of sequences ([`data`]), scores and empirical quantiles
//! ([`score`]), a small zoo of predictors ([`predictors`]), synthetic and CSV
//! data sources ([`processes`]), exact dependence coefficients on
//! finite-alphabet laws ([`coeffs`]) and a seeded experiment runner
//! ([`harness`]).

pub mod coeffs;
pub mod data;
pub mod error;
pub mod harness;
pub mod methods;
pub mod predictors;
pub mod processes;
pub mod rng;
pub mod score;

pub use data::{
    lift, mask, training_view, AugmentedPoint, LiftedCovariate, LiftedSequence, Observation,
    RawSeries,
};
pub use error::{Error, Result};
pub use methods::{jackknife, lwo, split_cp, LwoResult};
pub use predictors::{fit, FittedPredictor, PredictorSpec};
pub use score::{quantile, score, ExtendedReal, PredictionRegion, ScoreKind};
