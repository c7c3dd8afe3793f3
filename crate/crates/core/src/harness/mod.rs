//! Repeated-trial coverage experiments with per-trial derived seeds.

mod config;
mod summary;
mod trials;

pub use config::{ConfigLayer, ExperimentConfig, Method, ProcessSpec};
pub use summary::{summarize, Summary, SummaryRow};
pub use trials::{run_trials, trial_sequence, write_records, TrialRecord, RECORD_HEADER};
