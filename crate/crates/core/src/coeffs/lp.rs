//! Dense two-phase simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Entering columns are priced by most negative reduced cost, falling back to
//! Bland's rule (lowest-index entering column, lowest-index leaving basic
//! variable among ratio ties) whenever the objective stalls; the fallback
//! rules out cycling.

use thiserror::Error;

/// Largest number of structural variables accepted.
pub const MAX_LP_VARIABLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("linear program is infeasible (phase-one optimum {0:.3e})")]
    Infeasible(f64),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program too large: {0} variables (limit {MAX_LP_VARIABLES})")]
    TooLarge(usize),
    #[error("linear program dimensions are inconsistent: {0}")]
    Shape(String),
    #[error("simplex exceeded its iteration budget")]
    IterationLimit,
}

/// `min cᵀx` subject to `a_eq · x = b_eq`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpProblem {
    pub c: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

impl LpProblem {
    fn check(&self) -> Result<(), LpError> {
        let n = self.c.len();
        if n > MAX_LP_VARIABLES {
            return Err(LpError::TooLarge(n));
        }
        if self.a_eq.len() != self.b_eq.len() {
            return Err(LpError::Shape(format!("{} rows but {} right-hand sides", self.a_eq.len(), self.b_eq.len())));
        }
        if let Some(row) = self.a_eq.iter().find(|r| r.len() != n) {
            return Err(LpError::Shape(format!("row of length {} for {n} variables", row.len())));
        }
        if self.c.iter().chain(self.b_eq.iter()).chain(self.a_eq.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(LpError::Shape("non-finite coefficient".into()));
        }
        Ok(())
    }
}

/// Consecutive degenerate pivots tolerated before falling back to Bland's rule.
const STALL_LIMIT: usize = 50;
/// Reduced costs are recomputed from the tableau this often to shed drift.
const REFRESH_EVERY: usize = 64;

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    tol: f64,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.at(pr, pc);
        for v in &mut self.t[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f != 0.0 {
                for (v, pv) in self.t[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.t[r * w + pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Reduced costs of `cost` (length `cols`) with respect to the current basis.
    fn reduced_costs(&self, cost: &[f64], allowed: usize) -> Vec<f64> {
        let mut d: Vec<f64> = cost[..allowed].to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.at(r, j);
                }
            }
        }
        d
    }

    /// Simplex over columns `0..allowed`.
    ///
    /// Entering columns are chosen by most negative reduced cost. After
    /// [`STALL_LIMIT`] consecutive degenerate pivots the rule switches to
    /// Bland's (lowest index), which cannot cycle, and stays there until the
    /// next pivot that strictly lowers the objective. Since the objective only
    /// ever decreases and no basis repeats within a degenerate run, the method
    /// terminates.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), LpError> {
        let budget = 50_000 + 100 * (self.rows + self.cols);
        let mut d = self.reduced_costs(cost, allowed);
        let mut degenerate_run = 0usize;
        for iter in 0..budget {
            if iter % REFRESH_EVERY == REFRESH_EVERY - 1 {
                d = self.reduced_costs(cost, allowed);
            }
            let bland = degenerate_run >= STALL_LIMIT;
            let enter = if bland {
                (0..allowed).find(|&j| d[j] < -self.tol)
            } else {
                (0..allowed).filter(|&j| d[j] < -self.tol).min_by(|&a, &b| d[a].total_cmp(&d[b]))
            };
            let Some(enter) = enter else {
                // Confirm optimality against freshly computed reduced costs.
                let fresh = self.reduced_costs(cost, allowed);
                if fresh.iter().any(|&v| v < -self.tol) {
                    d = fresh;
                    continue;
                }
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, enter);
                if a > self.tol {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - self.tol
                                || (ratio <= lratio + self.tol && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, ratio)) = leave else {
                return Err(LpError::Unbounded);
            };
            if ratio <= self.tol {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, enter);
            // Update reduced costs with the new pivot row.
            let f = d[enter];
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= f * self.at(pr, j);
            }
            d[enter] = 0.0;
        }
        Err(LpError::IterationLimit)
    }
}

/// Solves the LP to tolerance `tol` (reduced costs and pivots below `tol` are treated as zero).
pub fn solve_lp(prob: &LpProblem, tol: f64) -> Result<LpSolution, LpError> {
    prob.check()?;
    let n = prob.c.len();
    let m = prob.b_eq.len();
    if m == 0 {
        // Only x ≥ 0: bounded iff c ≥ 0, optimum at the origin.
        if prob.c.iter().any(|&c| c < -tol) {
            return Err(LpError::Unbounded);
        }
        return Ok(LpSolution { objective: 0.0, x: vec![0.0; n] });
    }
    // Phase one: artificial variables n..n+m on rows normalized to b ≥ 0.
    let cols = n + m;
    let w = cols + 1;
    let mut t = vec![0.0; m * w];
    for (r, (row, &b)) in prob.a_eq.iter().zip(&prob.b_eq).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in row.iter().enumerate() {
            t[r * w + j] = sign * a;
        }
        t[r * w + n + r] = 1.0;
        t[r * w + cols] = sign * b;
    }
    // Start from unit columns where the problem already has them (typically
    // slack variables) and from artificials elsewhere.
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut used = vec![false; n];
    for j in 0..n {
        let mut hit = None;
        let mut unit = true;
        for r in 0..m {
            let v = t[r * w + j];
            if v == 1.0 && hit.is_none() {
                hit = Some(r);
            } else if v != 0.0 {
                unit = false;
                break;
            }
        }
        if let (true, Some(r)) = (unit, hit) {
            if basis[r] >= n && !used[j] {
                basis[r] = j;
                used[j] = true;
            }
        }
    }
    let mut tab = Tableau { t, rows: m, cols, basis, tol };
    let mut phase_one = vec![0.0; cols];
    phase_one[n..].iter_mut().for_each(|c| *c = 1.0);
    tab.optimize(&phase_one, cols)?;
    let infeasibility: f64 = (0..m).filter(|&r| tab.basis[r] >= n).map(|r| tab.rhs(r)).sum();
    let scale = 1.0 + prob.b_eq.iter().map(|b| b.abs()).fold(0.0, f64::max);
    if infeasibility > tol * scale {
        return Err(LpError::Infeasible(infeasibility));
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant and dropped.
    let mut r = 0;
    while r < tab.rows {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.at(r, j).abs() > tol) {
                Some(j) => {
                    tab.pivot(r, j);
                    r += 1;
                }
                None => {
                    tab.t.drain(r * w..(r + 1) * w);
                    tab.basis.remove(r);
                    tab.rows -= 1;
                }
            }
        } else {
            r += 1;
        }
    }
    // Phase two over the structural columns only.
    let mut cost = prob.c.clone();
    cost.extend(std::iter::repeat(0.0).take(m));
    tab.optimize(&cost, n)?;
    let mut x = vec![0.0; n];
    for r in 0..tab.rows {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r).max(0.0);
        }
    }
    let objective = prob.c.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { objective, x })
}
