//! Experiment configuration. A [`ConfigLayer`] holds optional settings from
//! one source (a TOML file or command-line flags); layers are merged with
//! later ones winning and then resolved into an [`ExperimentConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictors::PredictorSpec;
use crate::score::ScoreKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Split,
    Jackknife,
    Lwo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Split => "split",
            Method::Jackknife => "jackknife",
            Method::Lwo => "lwo",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "split" | "split_cp" => Ok(Method::Split),
            "jackknife" | "jk" => Ok(Method::Jackknife),
            "lwo" => Ok(Method::Lwo),
            other => Err(Error::invalid(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    /// `X_t = ω_t + ω_{t-1}`, `Y_t = X_{t+1}` in dimension `dim`.
    Ma1 { dim: usize },
    /// Epoch-sticky chain with switching probability `rho`.
    Sticky { rho: f64 },
    /// Exchangeable linear-Gaussian regression in dimension `dim`.
    IidLinear { dim: usize },
    /// Scalar column of a CSV file (0-based), cut into chunks `gap` rows apart.
    Csv { path: PathBuf, column: usize, gap: usize },
}

impl ProcessSpec {
    pub fn is_synthetic(&self) -> bool {
        !matches!(self, ProcessSpec::Csv { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    pub n: usize,
    /// Memory `L` of the lifted covariates.
    pub memory: usize,
    pub tau: usize,
    pub alpha: f64,
    pub inflation: f64,
    pub trials: usize,
    pub predictors: Vec<PredictorSpec>,
    pub methods: Vec<Method>,
    pub score: ScoreKind,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::invalid(format!("n must be at least 4, got {}", self.n)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.tau >= self.n {
            return Err(Error::WindowTooLarge { n: self.n, tau: self.tau });
        }
        if !(self.inflation >= 0.0 && self.inflation.is_finite()) {
            return Err(Error::invalid(format!("inflation must be finite and nonnegative, got {}", self.inflation)));
        }
        if self.predictors.is_empty() {
            return Err(Error::invalid("at least one predictor is required"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("at least one method is required"));
        }
        for p in &self.predictors {
            p.validate()?;
        }
        match &self.process {
            ProcessSpec::Ma1 { dim } | ProcessSpec::IidLinear { dim } if *dim == 0 => {
                Err(Error::invalid("process dimension must be positive"))
            }
            ProcessSpec::Sticky { rho } if !(*rho > 0.0 && *rho < 1.0) => {
                Err(Error::invalid(format!("sticky chain needs rho in (0, 1), got {rho}")))
            }
            _ => Ok(()),
        }
    }
}

/// One source of settings; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// `ma1`, `sticky`, `iid` or `csv`.
    pub process: Option<String>,
    pub dim: Option<usize>,
    pub rho: Option<f64>,
    pub path: Option<PathBuf>,
    pub column: Option<usize>,
    pub gap: Option<usize>,
    pub n: Option<usize>,
    pub memory: Option<usize>,
    pub tau: Option<usize>,
    pub alpha: Option<f64>,
    pub inflation: Option<f64>,
    pub trials: Option<usize>,
    pub predictors: Option<Vec<String>>,
    pub methods: Option<Vec<String>>,
    pub score: Option<String>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: ConfigLayer) -> ConfigLayer {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigLayer { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            process, dim, rho, path, column, gap, n, memory, tau, alpha, inflation, trials, predictors, methods,
            score, seed, output
        )
    }

    /// Fills defaults and validates. The process and `n` have no default.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let kind = self.process.ok_or_else(|| Error::invalid("process is required"))?;
        let process = match kind.to_ascii_lowercase().as_str() {
            "ma1" => ProcessSpec::Ma1 { dim: self.dim.unwrap_or(50) },
            "sticky" => ProcessSpec::Sticky { rho: self.rho.unwrap_or(0.05) },
            "iid" | "iid_linear" => ProcessSpec::IidLinear { dim: self.dim.unwrap_or(1) },
            "csv" => ProcessSpec::Csv {
                path: self.path.ok_or_else(|| Error::invalid("csv process needs a path"))?,
                column: self.column.unwrap_or(0),
                gap: self.gap.unwrap_or(0),
            },
            other => return Err(Error::invalid(format!("unknown process '{other}'"))),
        };
        let predictors = self
            .predictors
            .unwrap_or_else(|| vec!["knn:10".into()])
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PredictorSpec>>>()?;
        let methods = self
            .methods
            .unwrap_or_else(|| vec!["split".into(), "jackknife".into(), "lwo".into()])
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Method>>>()?;
        let cfg = ExperimentConfig {
            process,
            n: self.n.ok_or_else(|| Error::invalid("n is required"))?,
            memory: self.memory.unwrap_or(0),
            tau: self.tau.unwrap_or(0),
            alpha: self.alpha.unwrap_or(0.1),
            inflation: self.inflation.unwrap_or(0.0),
            trials: self.trials.unwrap_or(500),
            predictors,
            methods,
            score: self.score.as_deref().unwrap_or("l2").parse()?,
            seed: self.seed.unwrap_or(0),
            output: self.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
