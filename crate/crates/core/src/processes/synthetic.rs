//! Continuous-state generators.

use rand::Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};

use crate::data::RawSeries;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

fn normal_vec<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

/// Vector MA(1): `X_i = ω_{i-1} + ω_i` with `ω_i ~ N(0, I_d)` i.i.d. and `Y_i = X_{i+1}`.
pub fn gen_ma1(d: usize, length: usize, seed: u64) -> Result<RawSeries> {
    if d == 0 {
        return Err(Error::invalid("MA(1) dimension must be positive"));
    }
    if length < 2 {
        return Err(Error::invalid("MA(1) series needs length >= 2"));
    }
    let mut rng = rng_from_seed(seed);
    let omega: Vec<Vec<f64>> = (0..length + 2).map(|_| normal_vec(&mut rng, d)).collect();
    let x: Vec<Vec<f64>> = (1..=length + 1)
        .map(|i| omega[i - 1].iter().zip(&omega[i]).map(|(a, b)| a + b).collect())
        .collect();
    let y = x[1..].to_vec();
    RawSeries::new(x[..length].to_vec(), y, 1)
}

/// Latent state of the sticky chain at one time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StickyState {
    /// Position within the current epoch, starting at 1.
    pub t: usize,
    /// Length of the current epoch.
    pub k: usize,
}

/// Epoch-based chain: each epoch draws a length `K ≥ 1` with
/// `K - 1 ~ Geometric(rho)`, a covariate `X ~ N(0, 1)` held fixed for the
/// whole epoch, and responses `Y ~ N(K, 1)` at every step.
pub fn gen_sticky_chain(rho: f64, length: usize, seed: u64) -> Result<RawSeries> {
    gen_sticky_chain_with_state(rho, length, seed).map(|(series, _)| series)
}

/// [`gen_sticky_chain`] together with the latent `(T_t, K_t)` path.
pub fn gen_sticky_chain_with_state(rho: f64, length: usize, seed: u64) -> Result<(RawSeries, Vec<StickyState>)> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(format!("sticky chain needs rho in (0, 1), got {rho}")));
    }
    if length == 0 {
        return Err(Error::invalid("sticky chain needs length >= 1"));
    }
    let geom = Geometric::new(rho).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let mut x = Vec::with_capacity(length);
    let mut y = Vec::with_capacity(length);
    let mut states = Vec::with_capacity(length);
    let mut state = StickyState { t: 0, k: 0 };
    let mut cov = 0.0;
    for _ in 0..length {
        if state.t == state.k {
            state = StickyState {
                t: 1,
                k: 1 + geom.sample(&mut rng) as usize,
            };
            cov = StandardNormal.sample(&mut rng);
        } else {
            state.t += 1;
        }
        let noise: f64 = StandardNormal.sample(&mut rng);
        x.push(vec![cov]);
        y.push(vec![state.k as f64 + noise]);
        states.push(state);
    }
    Ok((RawSeries::new(x, y, 1)?, states))
}

/// I.i.d. linear model: `X ~ N(0, I_d)`, `Y = ⟨1, X⟩/√d + ε` with `ε ~ N(0, 1)`.
pub fn gen_iid_linear(d: usize, length: usize, seed: u64) -> Result<RawSeries> {
    if d == 0 || length == 0 {
        return Err(Error::invalid("i.i.d. linear model needs d >= 1 and length >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let scale = 1.0 / (d as f64).sqrt();
    let mut x = Vec::with_capacity(length);
    let mut y = Vec::with_capacity(length);
    for _ in 0..length {
        let xi = normal_vec(&mut rng, d);
        let noise: f64 = StandardNormal.sample(&mut rng);
        y.push(vec![xi.iter().sum::<f64>() * scale + noise]);
        x.push(xi);
    }
    RawSeries::new(x, y, 1)
}
