//! Exact laws of finite-alphabet processes.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dense state space (`A^m` cells) any exact computation will allocate.
pub const SIZE_GUARD: usize = 10_000_000;

/// `A^m`, or a size-guard error when it exceeds [`SIZE_GUARD`].
pub(crate) fn guarded_pow(a: usize, m: usize) -> Result<usize> {
    u32::try_from(m)
        .ok()
        .and_then(|m| a.checked_pow(m))
        .filter(|&s| s <= SIZE_GUARD)
        .ok_or_else(|| Error::SizeGuard(format!("{a}^{m} cells exceeds the limit of {SIZE_GUARD}")))
}

/// The joint law of `(Z_1, ..., Z_m)` over symbols `0..A`, stored densely.
/// Sequence `(a_1, ..., a_m)` lives at index `Σ a_i A^{m-i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteProcess {
    pub alphabet_size: usize,
    pub m: usize,
    pub joint: Vec<f64>,
}

impl FiniteProcess {
    pub fn new(alphabet_size: usize, m: usize, joint: Vec<f64>) -> Result<Self> {
        let p = Self { alphabet_size, m, joint };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet_size == 0 || self.m == 0 {
            return Err(Error::invalid("finite process needs a nonempty alphabet and length"));
        }
        let cells = guarded_pow(self.alphabet_size, self.m)?;
        if self.joint.len() != cells {
            return Err(Error::DimensionMismatch {
                expected: cells,
                got: self.joint.len(),
            });
        }
        if self.joint.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::invalid("joint probabilities must be finite and nonnegative"));
        }
        let total: f64 = self.joint.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("joint probabilities sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::Data(format!("finite process file: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn encode(&self, symbols: &[usize]) -> usize {
        symbols.iter().fold(0, |acc, &s| acc * self.alphabet_size + s)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for slot in out.iter_mut().rev() {
            *slot = index % self.alphabet_size;
            index /= self.alphabet_size;
        }
        out
    }

    pub fn prob(&self, symbols: &[usize]) -> f64 {
        self.joint[self.encode(symbols)]
    }

    /// Draws one sequence by inverting the cumulative joint.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.joint.iter().enumerate() {
            acc += p;
            if u < acc {
                return self.decode(i);
            }
        }
        let last = self.joint.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        self.decode(last)
    }
}

/// A time-homogeneous Markov chain on `0..A`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    transition: Vec<Vec<f64>>,
    init: Vec<f64>,
}

impl MarkovChain {
    pub fn new(transition: Vec<Vec<f64>>, init: Vec<f64>) -> Result<Self> {
        let a = init.len();
        if a == 0 || transition.len() != a || transition.iter().any(|r| r.len() != a) {
            return Err(Error::invalid("transition matrix must be square and match the initial law"));
        }
        let is_pmf = |row: &[f64]| row.iter().all(|&p| p >= 0.0 && p.is_finite()) && (row.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        if !is_pmf(&init) || !transition.iter().all(|r| is_pmf(r)) {
            return Err(Error::invalid("rows of the transition matrix and the initial law must be probability vectors"));
        }
        Ok(Self { transition, init })
    }

    /// A chain started from a stationary law of `transition`.
    pub fn stationary(transition: Vec<Vec<f64>>) -> Result<Self> {
        let a = transition.len();
        // Solve πᵀ(P - I) = 0 with Σπ = 1 by replacing one equation.
        let mut m = DMatrix::from_fn(a, a, |i, j| transition[j][i] - if i == j { 1.0 } else { 0.0 });
        let mut rhs = DMatrix::zeros(a, 1);
        for j in 0..a {
            m[(a - 1, j)] = 1.0;
        }
        rhs[(a - 1, 0)] = 1.0;
        let pi = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::invalid("transition matrix has no unique stationary law"))?;
        let mut init: Vec<f64> = pi.iter().map(|&p| p.max(0.0)).collect();
        let total: f64 = init.iter().sum();
        init.iter_mut().for_each(|p| *p /= total);
        Self::new(transition, init)
    }

    pub fn alphabet_size(&self) -> usize {
        self.init.len()
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    /// Exact joint law of the first `m` states.
    pub fn joint(&self, m: usize) -> Result<FiniteProcess> {
        if m == 0 {
            return Err(Error::invalid("chain length must be positive"));
        }
        let a = self.alphabet_size();
        guarded_pow(a, m)?;
        let mut joint = self.init.clone();
        for _ in 1..m {
            let mut next = Vec::with_capacity(joint.len() * a);
            for (idx, &p) in joint.iter().enumerate() {
                let last = idx % a;
                next.extend(self.transition[last].iter().map(|q| p * q));
            }
            joint = next;
        }
        FiniteProcess::new(a, m, joint)
    }

    /// Simulates `m` steps of the chain.
    pub fn sample<R: Rng>(&self, m: usize, rng: &mut R) -> Vec<usize> {
        let draw = |row: &[f64], rng: &mut R| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for (s, &p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    return s;
                }
            }
            row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
        };
        let mut out = Vec::with_capacity(m);
        if m == 0 {
            return out;
        }
        out.push(draw(&self.init, rng));
        while out.len() < m {
            let s = draw(&self.transition[*out.last().unwrap()], rng);
            out.push(s);
        }
        out
    }
}

/// Exact joint law of `m` steps of a Markov chain, plus the chain for sampling.
pub fn gen_finite_chain(transition: Vec<Vec<f64>>, init: Vec<f64>, m: usize) -> Result<(FiniteProcess, MarkovChain)> {
    let chain = MarkovChain::new(transition, init)?;
    Ok((chain.joint(m)?, chain))
}

/// Binary moving average: `Z_t = (ω_{t-1}, ω_t)` for i.i.d. fair bits, encoded
/// as the symbol `2ω_{t-1} + ω_t` of a 4-letter alphabet.
pub fn gen_binary_ma(length: usize) -> Result<FiniteProcess> {
    if length == 0 {
        return Err(Error::invalid("length must be positive"));
    }
    let cells = guarded_pow(4, length)?;
    let mut joint = vec![0.0; cells];
    let weight = 0.5f64.powi(length as i32 + 1);
    for bits in 0u64..(1u64 << (length + 1)) {
        let omega = |i: usize| ((bits >> (length - i)) & 1) as usize;
        let index = (1..=length).fold(0, |acc, t| acc * 4 + 2 * omega(t - 1) + omega(t));
        joint[index] += weight;
    }
    FiniteProcess::new(4, length, joint)
}
