//! Switch coefficients: distances between the two ways of deleting a window
//! of `τ` entries and reading the remainder in cyclic order.

use std::collections::BTreeMap;

use super::pmf::{marginal, tv};
use crate::error::{Error, Result};
use crate::processes::FiniteProcess;

/// 0-based positions read by `Δ⁰_{k,τ}` and `Δ¹_{k,τ}` on a sequence of
/// length `n + 1`, in output order.
pub fn switch_positions(n: usize, k: i64, tau: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if tau > n {
        return Err(Error::WindowTooLarge { n, tau });
    }
    if k < -(tau as i64) || k > n as i64 {
        return Err(Error::InvalidParameter(format!("switch index {k} outside -{tau}..={n}")));
    }
    let m = n + 1;
    if k <= 0 {
        let start = (k + tau as i64) as usize;
        return Ok(((start..m).collect(), (0..m - start).collect()));
    }
    let k = k as usize;
    if k <= n - tau {
        let zero = (0..k).chain(k + tau..m).collect();
        let one = (m - k..m).chain(0..m - k - tau).collect();
        Ok((zero, one))
    } else {
        Ok(((0..k).collect(), (m - k..m).collect()))
    }
}

fn check_process(p: &FiniteProcess) -> Result<usize> {
    p.m.checked_sub(1).ok_or(Error::Empty("process of length zero"))
}

/// `Ψ_{k,τ}`: TV between the laws of `Δ⁰_{k,τ}(Z)` and `Δ¹_{k,τ}(Z)`.
pub fn switch_coeff(p: &FiniteProcess, k: i64, tau: usize) -> Result<f64> {
    let n = check_process(p)?;
    let (zero, one) = switch_positions(n, k, tau)?;
    tv(&marginal(&p.joint, p.alphabet_size, p.m, &zero), &marginal(&p.joint, p.alphabet_size, p.m, &one))
}

/// All `Ψ_{k,τ}` for `k = -τ, ..., n`, in that order.
pub fn switch_profile(p: &FiniteProcess, tau: usize) -> Result<Vec<f64>> {
    let n = check_process(p)?;
    (-(tau as i64)..=n as i64).map(|k| switch_coeff(p, k, tau)).collect()
}

/// `Ψ̄_τ`: mean of `Ψ_{k,τ}` over `k ∈ {-τ, ..., n}`.
pub fn avg_switch(p: &FiniteProcess, tau: usize) -> Result<f64> {
    let profile = switch_profile(p, tau)?;
    Ok(profile.iter().sum::<f64>() / profile.len() as f64)
}

/// `Ψ̲_τ`: TV between the laws of `Δ⁰_{K,τ}(Z)` and `Δ¹_{K,τ}(Z)` for
/// `K ~ Unif{-τ, ..., n}`.
///
/// The deleted sequences have a length that depends on `K`, so each law lives
/// on the disjoint union of `A^ℓ` over lengths `ℓ`; the mixture components are
/// pooled by length before taking the distance.
pub fn pooled_switch(p: &FiniteProcess, tau: usize) -> Result<f64> {
    let n = check_process(p)?;
    let weight = 1.0 / (n + tau + 1) as f64;
    let mut pools: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for k in -(tau as i64)..=n as i64 {
        let (zero, one) = switch_positions(n, k, tau)?;
        let len = zero.len();
        let cells = p.alphabet_size.pow(len as u32);
        let entry = pools.entry(len).or_insert_with(|| (vec![0.0; cells], vec![0.0; cells]));
        let d0 = marginal(&p.joint, p.alphabet_size, p.m, &zero);
        let d1 = marginal(&p.joint, p.alphabet_size, p.m, &one);
        for (acc, v) in entry.0.iter_mut().zip(d0) {
            *acc += weight * v;
        }
        for (acc, v) in entry.1.iter_mut().zip(d1) {
            *acc += weight * v;
        }
    }
    pools.values().try_fold(0.0, |acc, (a, b)| Ok(acc + tv(a, b)?))
}
