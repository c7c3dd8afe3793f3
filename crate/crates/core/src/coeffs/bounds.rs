//! Coverage lower bounds for the leave-window-out interval as functions of
//! the stability and dependence coefficients.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub n: usize,
    pub tau: usize,
    /// Out-of-sample stability level.
    pub nu: f64,
    pub beta: f64,
    pub beta_star: f64,
    /// `Ψ̄_τ`.
    pub avg_switch: f64,
    /// `Ψ_{0,τ}`.
    pub psi0: f64,
    /// `ρ_τ(Z)`; when absent, its mixing upper bound `2β + 2β* + 4τ/(n+τ+1)` is used.
    #[serde(default)]
    pub rho: Option<f64>,
    /// `ρ_τ(M_{K,τ}(Z))`; when absent, its switch upper bound `Ψ̄_τ + Ψ_{0,τ}` is used.
    #[serde(default)]
    pub rho_masked: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageBounds {
    /// Bound in terms of the cyclic embedding coefficient of `Z`.
    pub cyclic: f64,
    /// Bound in terms of the masked embedding coefficient and `Ψ̄_τ`.
    pub masked: f64,
    /// Cyclic bound with `ρ` controlled by `β` and `β*` (stationary `Z`).
    pub mixing_markov: f64,
    /// Masked bound with everything controlled by `β` (stationary `Z`).
    pub mixing: f64,
}

pub fn coverage_bounds(inp: &BoundInputs) -> CoverageBounds {
    let n = inp.n as f64;
    let tau = inp.tau as f64;
    let rho = inp.rho.unwrap_or(2.0 * inp.beta + 2.0 * inp.beta_star + 4.0 * tau / (n + tau + 1.0));
    let rho_masked = inp.rho_masked.unwrap_or(inp.avg_switch + inp.psi0);
    let cover = 1.0 - inp.alpha;
    CoverageBounds {
        cyclic: cover - rho - (tau + 1.0) / n - 2.0 * (inp.nu + rho).sqrt(),
        masked: cover
            - 3.0 * (inp.nu + (2.0 * tau + 2.0) / n + rho_masked).sqrt()
            - 2.0 * (inp.nu + tau / n + (n + tau + 1.0) / n * inp.avg_switch).sqrt(),
        mixing_markov: cover - 3.0 * (inp.nu + 2.0 * inp.beta + 2.0 * inp.beta_star + (5.0 * tau + 1.0) / n).sqrt(),
        mixing: cover - 5.0 * (inp.nu + (2.0 * tau + 2.0) / n + 2.0 * inp.beta).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(alpha: f64, n: usize, tau: usize) -> BoundInputs {
        BoundInputs { alpha, n, tau, nu: 0.0, beta: 0.0, beta_star: 0.0, avg_switch: 0.0, psi0: 0.0, rho: Some(0.0), rho_masked: Some(0.0) }
    }

    #[test]
    fn mixing_markov_example() {
        // 0.9 - 3·sqrt(11/200) = 0.9 - 3·0.234520787991... = 0.1964376360264...
        let b = coverage_bounds(&zero(0.1, 200, 2));
        assert!((b.mixing_markov - 0.196_437_636_026_485_6).abs() < 1e-14);
    }

    #[test]
    fn mixing_example() {
        // 0.9 - 5·sqrt(2/200) = 0.9 - 0.5
        let b = coverage_bounds(&zero(0.1, 200, 0));
        assert!((b.mixing - 0.4).abs() < 1e-15);
    }

    #[test]
    fn cyclic_bound_reduces_to_jackknife_rate() {
        for n in [10usize, 1000, 1_000_000] {
            let b = coverage_bounds(&zero(0.1, n, 0));
            assert!((b.cyclic - (0.9 - 1.0 / n as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn missing_rho_uses_mixing_bound() {
        let mut inp = zero(0.1, 100, 3);
        inp.rho = None;
        inp.beta = 0.01;
        inp.beta_star = 0.02;
        let rho: f64 = 0.06 + 12.0 / 104.0;
        let b = coverage_bounds(&inp);
        assert!((b.cyclic - (0.9 - rho - 0.04 - 2.0 * rho.sqrt())).abs() < 1e-14);
        inp.rho_masked = None;
        inp.avg_switch = 0.03;
        inp.psi0 = 0.01;
        let b = coverage_bounds(&inp);
        let want = 0.9 - 3.0 * (0.08f64 + 0.04).sqrt() - 2.0 * (0.03 + 1.04 * 0.03f64).sqrt();
        assert!((b.masked - want).abs() < 1e-14);
    }
}
