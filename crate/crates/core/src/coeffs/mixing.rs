//! Block mixing coefficients `β(τ)` and `β*(τ)` computed exactly from a joint law.

use rayon::prelude::*;

use super::pmf::{decode_into, encode, marginal, tv};
use crate::error::{Error, Result};
use crate::processes::FiniteProcess;

fn check_lag(p: &FiniteProcess, tau: usize) -> Result<usize> {
    let n = p.m.checked_sub(1).ok_or(Error::Empty("process of length zero"))?;
    if tau < 1 || tau + 1 > n {
        return Err(Error::InvalidParameter(format!("lag {tau} outside 1..={} for n = {n}", n.saturating_sub(1))));
    }
    Ok(n)
}

fn max_over(values: Vec<Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

/// `β(τ)`: largest TV between the law of `(Z_{1:k}, Z_{k+τ+1:n+1})` and the
/// product of its block marginals, over `1 ≤ k ≤ n-τ`.
pub fn beta_mixing(p: &FiniteProcess, tau: usize) -> Result<f64> {
    let n = check_lag(p, tau)?;
    let (a, m) = (p.alphabet_size, p.m);
    let per_k = (1..=n - tau)
        .into_par_iter()
        .map(|k| {
            let positions: Vec<usize> = (0..k).chain(k + tau..m).collect();
            let joint = marginal(&p.joint, a, m, &positions);
            let prefix = marginal(&p.joint, a, m, &(0..k).collect::<Vec<_>>());
            let suffix = marginal(&p.joint, a, m, &(k + tau..m).collect::<Vec<_>>());
            let product: Vec<f64> = prefix.iter().flat_map(|&u| suffix.iter().map(move |&v| u * v)).collect();
            tv(&joint, &product)
        })
        .collect();
    max_over(per_k)
}

/// `β*(τ)`: largest TV between the joint law and the law in which prefix
/// `Z_{1:k}` and suffix `Z_{k+τ+1:n+1}` are redrawn independently given the
/// middle block `Z_{k+1:k+τ}`, over `1 ≤ k ≤ n-τ`.
///
/// Middle blocks of probability zero get zero surrogate mass, as in the joint.
pub fn beta_cond_mixing(p: &FiniteProcess, tau: usize) -> Result<f64> {
    let n = check_lag(p, tau)?;
    let (a, m) = (p.alphabet_size, p.m);
    let per_k = (1..=n - tau)
        .into_par_iter()
        .map(|k| {
            let left = marginal(&p.joint, a, m, &(0..k + tau).collect::<Vec<_>>());
            let right = marginal(&p.joint, a, m, &(k..m).collect::<Vec<_>>());
            let mid = marginal(&p.joint, a, m, &(k..k + tau).collect::<Vec<_>>());
            let mut digits = vec![0; m];
            let mut dist = 0.0;
            for (idx, &q) in p.joint.iter().enumerate() {
                decode_into(idx, a, &mut digits);
                let pm = mid[encode(&digits[k..k + tau], a)];
                let surrogate = if pm > 0.0 {
                    left[encode(&digits[..k + tau], a)] * right[encode(&digits[k..], a)] / pm
                } else {
                    0.0
                };
                dist += (q - surrogate).abs();
            }
            Ok(0.5 * dist)
        })
        .collect();
    max_over(per_k)
}
