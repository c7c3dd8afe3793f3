//! Cyclic embedding coefficient restricted to the augmented alphabet.
//!
//! `ρ̂_a(Q)` is the smallest TV between `Q` and the first `m` coordinates of a
//! shift-invariant law on `(A+1)^{m+a}`. A law invariant under one cyclic shift
//! is constant on shift orbits, so the LP has one weight per orbit:
//!
//! ```text
//! min Σ_y u_y   s.t.  Σ_o w_o c_o(y)/|o| + u_y - s_y = Q(y)   for y ∈ supp Q
//!                     Σ_o w_o = 1,   w, u, s ≥ 0
//! ```
//!
//! where `c_o(y)` counts the members of orbit `o` whose first `m` symbols are
//! `y`. Since both laws have mass one, `Σ_y (Q(y) - R(y))⁺` is their TV, and
//! that sum only involves `y ∈ supp Q`. Orbits whose members never start with
//! a point of `supp Q` are dropped: moving their weight elsewhere cannot
//! increase any `(Q(y) - R(y))⁺`.

use super::lp::{solve_lp, LpProblem};
use super::pmf::AugmentedPmf;
use crate::error::Result;
use crate::processes::guarded_pow;

const LP_TOL: f64 = 1e-9;

/// Order in which orbit variables are laid out in the LP. The optimum does
/// not depend on it; it exists to exercise the solver on permuted problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitOrder {
    #[default]
    Forward,
    Reverse,
}

struct Orbit {
    size: usize,
    /// `(constraint row, member count)` for members whose prefix lies in `supp Q`.
    hits: Vec<(usize, usize)>,
}

fn orbits(q: &AugmentedPmf, a: usize, row_of: &[Option<usize>]) -> Result<Vec<Orbit>> {
    let s = q.symbols();
    let len = q.m + a;
    let cells = guarded_pow(s, len)?;
    let top = cells / s;
    let tail = guarded_pow(s, a)?;
    let rotate = |x: usize| (x % top) * s + x / top;
    let mut out = Vec::new();
    for x in 0..cells {
        let mut members = vec![x];
        let mut y = rotate(x);
        let mut canonical = true;
        while y != x {
            if y < x {
                canonical = false;
                break;
            }
            members.push(y);
            y = rotate(y);
        }
        if !canonical {
            continue;
        }
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for &e in &members {
            if let Some(row) = row_of[e / tail] {
                match hits.iter_mut().find(|(r, _)| *r == row) {
                    Some(h) => h.1 += 1,
                    None => hits.push((row, 1)),
                }
            }
        }
        if !hits.is_empty() {
            out.push(Orbit { size: members.len(), hits });
        }
    }
    Ok(out)
}

/// `ρ̂_a(Q)` with the default variable order.
pub fn rho_lp(q: &AugmentedPmf, a: usize) -> Result<f64> {
    rho_lp_ordered(q, a, OrbitOrder::Forward)
}

pub fn rho_lp_ordered(q: &AugmentedPmf, a: usize, order: OrbitOrder) -> Result<f64> {
    let support: Vec<usize> = (0..q.probs.len()).filter(|&y| q.probs[y] > 0.0).collect();
    let mut row_of = vec![None; q.probs.len()];
    for (r, &y) in support.iter().enumerate() {
        row_of[y] = Some(r);
    }
    let mut orbits = orbits(q, a, &row_of)?;
    if order == OrbitOrder::Reverse {
        orbits.reverse();
    }
    let rows = support.len() + 1;
    let n_orbit = orbits.len();
    let vars = n_orbit + 2 * support.len();
    let mut a_eq = vec![vec![0.0; vars]; rows];
    for (j, orbit) in orbits.iter().enumerate() {
        for &(r, count) in &orbit.hits {
            a_eq[r][j] = count as f64 / orbit.size as f64;
        }
        a_eq[support.len()][j] = 1.0;
    }
    let mut c = vec![0.0; vars];
    for r in 0..support.len() {
        a_eq[r][n_orbit + r] = 1.0;
        a_eq[r][n_orbit + support.len() + r] = -1.0;
        c[n_orbit + r] = 1.0;
    }
    let mut b_eq: Vec<f64> = support.iter().map(|&y| q.probs[y]).collect();
    b_eq.push(1.0);
    let sol = solve_lp(&LpProblem { c, a_eq, b_eq }, LP_TOL)?;
    Ok(sol.objective.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::pmf::{decode_into, encode, masked_mixture};
    use crate::processes::{gen_binary_ma, gen_finite_chain, FiniteProcess, MarkovChain};
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn augmented(alphabet_size: usize, m: usize, probs: Vec<f64>) -> AugmentedPmf {
        AugmentedPmf { alphabet_size, m, probs }
    }

    /// Oracle on the full cell space: one variable per cell, explicit
    /// shift-invariance equalities, and the `|Q - R_marg|` split on every cell.
    fn rho_full_oracle(q: &AugmentedPmf, a: usize) -> f64 {
        let s = q.symbols();
        let len = q.m + a;
        let cells = s.pow(len as u32);
        let ys = q.probs.len();
        let tail = s.pow(a as u32);
        let vars = cells + 2 * ys;
        let mut rows = Vec::new();
        let mut b = Vec::new();
        let mut digits = vec![0; len];
        for x in 0..cells {
            decode_into(x, s, &mut digits);
            digits.rotate_left(1);
            let y = encode(&digits, s);
            if y != x {
                let mut row = vec![0.0; vars];
                row[x] = 1.0;
                row[y] = -1.0;
                rows.push(row);
                b.push(0.0);
            }
        }
        for y in 0..ys {
            let mut row = vec![0.0; vars];
            for x in y * tail..(y + 1) * tail {
                row[x] = 1.0;
            }
            row[cells + y] = 1.0;
            row[cells + ys + y] = -1.0;
            rows.push(row);
            b.push(q.probs[y]);
        }
        let mut row = vec![0.0; vars];
        row[..cells].iter_mut().for_each(|v| *v = 1.0);
        rows.push(row);
        b.push(1.0);
        let mut c = vec![0.0; vars];
        c[cells..].iter_mut().for_each(|v| *v = 0.5);
        solve_lp(&LpProblem { c, a_eq: rows, b_eq: b }, 1e-10).unwrap().objective
    }

    #[test]
    fn deterministic_pair_hand_values() {
        // Q = δ_(0,1) over {0,1,⋆}². With a = 0 the best shift-invariant law
        // puts ½ on (0,1) and (1,0); with a = 1 every non-constant orbit of
        // length 3 has exactly one member starting with (0,1).
        let mut probs = vec![0.0; 9];
        probs[1] = 1.0;
        let q = augmented(2, 2, probs);
        assert!((rho_lp(&q, 0).unwrap() - 0.5).abs() < 1e-9);
        assert!((rho_lp(&q, 1).unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn exchangeable_and_constant_laws_embed() {
        let iid = MarkovChain::new(vec![vec![0.3, 0.7]; 2], vec![0.3, 0.7]).unwrap().joint(4).unwrap();
        let (constant, _) = gen_finite_chain(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5], 4).unwrap();
        for a in 0..3 {
            assert!(rho_lp(&AugmentedPmf::embed(&iid).unwrap(), a).unwrap() < 1e-8);
        }
        assert!(rho_lp(&AugmentedPmf::embed(&constant).unwrap(), 0).unwrap() < 1e-8);
    }

    #[test]
    fn binary_ma_embeds_with_lengthening_two() {
        let q = AugmentedPmf::embed(&gen_binary_ma(4).unwrap()).unwrap();
        assert!(rho_lp(&q, 2).unwrap() <= 1e-6);
    }

    #[test]
    fn matches_full_cell_formulation() {
        let mut rng = rng_from_seed(5);
        for (m, a) in [(2, 0), (2, 1), (3, 0), (2, 2)] {
            for _ in 0..3 {
                // Random law on {0,1}^m with a few cells removed, embedded with ⋆.
                let mut joint: Vec<f64> = (0..1 << m).map(|_| rng.random::<f64>() * rng.random::<f64>()).collect();
                joint[rng.random_range(0..1 << m)] = 0.0;
                let total: f64 = joint.iter().sum();
                joint.iter_mut().for_each(|v| *v /= total);
                let q = AugmentedPmf::embed(&FiniteProcess::new(2, m, joint).unwrap()).unwrap();
                let fast = rho_lp(&q, a).unwrap();
                let full = rho_full_oracle(&q, a);
                assert!((fast - full).abs() < 1e-8, "m={m} a={a}: {fast} vs {full}");
            }
        }
    }

    #[test]
    fn orbit_order_does_not_change_optimum() {
        let (p, _) = gen_finite_chain(vec![vec![0.7, 0.3], vec![0.1, 0.9]], vec![0.8, 0.2], 4).unwrap();
        for q in [AugmentedPmf::embed(&p).unwrap(), masked_mixture(&p, 1).unwrap()] {
            for a in 0..3 {
                let fwd = rho_lp_ordered(&q, a, OrbitOrder::Forward).unwrap();
                let rev = rho_lp_ordered(&q, a, OrbitOrder::Reverse).unwrap();
                assert!((fwd - rev).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cyclically_symmetrized_law_embeds() {
        let mut rng = rng_from_seed(9);
        let (s, m) = (3, 3);
        let raw: Vec<f64> = (0..27).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let mut probs = vec![0.0; 27];
        let mut digits = vec![0; m];
        for (x, &w) in raw.iter().enumerate() {
            decode_into(x, s, &mut digits);
            for _ in 0..m {
                digits.rotate_left(1);
                probs[encode(&digits, s)] += w / total / m as f64;
            }
        }
        assert!(rho_lp(&augmented(2, m, probs), 0).unwrap() < 1e-8);
    }

    #[test]
    fn size_guard_is_enforced() {
        let q = AugmentedPmf::embed(&gen_binary_ma(4).unwrap()).unwrap();
        assert!(rho_lp(&q, 7).is_err());
    }
}
