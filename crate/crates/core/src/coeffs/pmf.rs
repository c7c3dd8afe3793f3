//! Dense laws on finite product spaces and the operations shared by the
//! coefficient computations.

use serde::{Deserialize, Serialize};

use crate::data::masked_range;
use crate::error::{Error, Result};
use crate::processes::{guarded_pow, FiniteProcess};

/// Total variation distance `½ Σ |p - q|`.
pub fn tv(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Marginal of a dense joint over `symbols^len` onto the listed 0-based
/// positions, returned in the order given.
pub(crate) fn marginal(joint: &[f64], symbols: usize, len: usize, positions: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; symbols.pow(positions.len() as u32)];
    let mut digits = vec![0usize; len];
    for (idx, &p) in joint.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        decode_into(idx, symbols, &mut digits);
        let sub = positions.iter().fold(0, |acc, &i| acc * symbols + digits[i]);
        out[sub] += p;
    }
    out
}

pub(crate) fn decode_into(mut idx: usize, symbols: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = idx % symbols;
        idx /= symbols;
    }
}

pub(crate) fn encode(digits: &[usize], symbols: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * symbols + d)
}

/// Law on the augmented alphabet `{0, ..., A-1} ∪ {⋆}`, with `⋆` encoded as symbol `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedPmf {
    /// `A`, not counting `⋆`.
    pub alphabet_size: usize,
    pub m: usize,
    /// Dense law over `(A+1)^m`.
    pub probs: Vec<f64>,
}

impl AugmentedPmf {
    pub fn star(&self) -> usize {
        self.alphabet_size
    }

    pub fn symbols(&self) -> usize {
        self.alphabet_size + 1
    }

    /// `P` viewed on the augmented alphabet (no mass on sequences containing `⋆`).
    pub fn embed(p: &FiniteProcess) -> Result<Self> {
        let s = p.alphabet_size + 1;
        let mut probs = vec![0.0; guarded_pow(s, p.m)?];
        let mut digits = vec![0; p.m];
        for (idx, &q) in p.joint.iter().enumerate() {
            if q > 0.0 {
                decode_into(idx, p.alphabet_size, &mut digits);
                probs[encode(&digits, s)] += q;
            }
        }
        Ok(Self { alphabet_size: p.alphabet_size, m: p.m, probs })
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability of a sequence given as symbols, `None` standing for `⋆`.
    pub fn prob(&self, seq: &[Option<usize>]) -> f64 {
        let digits: Vec<usize> = seq.iter().map(|s| s.unwrap_or(self.star())).collect();
        self.probs[encode(&digits, self.symbols())]
    }
}

/// Law of `M_{K,τ}(Z)` for `K ~ Unif{-τ, ..., n}` where `Z` has law `p` and length `n + 1`.
pub fn masked_mixture(p: &FiniteProcess, tau: usize) -> Result<AugmentedPmf> {
    let m = p.m;
    if tau >= m {
        return Err(Error::WindowExceedsSequence { tau, len: m });
    }
    let n = m - 1;
    let s = p.alphabet_size + 1;
    let mut probs = vec![0.0; guarded_pow(s, m)?];
    let weight = 1.0 / (n + tau + 1) as f64;
    let mut digits = vec![0; m];
    for k in -(tau as i64)..=n as i64 {
        let window = masked_range(m, k, tau)?;
        for (idx, &q) in p.joint.iter().enumerate() {
            if q > 0.0 {
                decode_into(idx, p.alphabet_size, &mut digits);
                for d in &mut digits[window.clone()] {
                    *d = p.alphabet_size;
                }
                probs[encode(&digits, s)] += weight * q;
            }
        }
    }
    Ok(AugmentedPmf { alphabet_size: p.alphabet_size, m, probs })
}
