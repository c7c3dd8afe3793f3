//! One-hidden-layer ReLU network trained by full-batch gradient descent.
//!
//! Inputs and outputs are standardized with training statistics. Weights
//! start from `U(-1/√fan_in, 1/√fan_in)` drawn from the fit seed, and the loss
//! `1/(2N) Σ ‖f(x_i) - y_i‖²` is minimized for [`MLP_EPOCHS`] steps of size
//! [`MLP_LEARNING_RATE`]. Rows sharing an input are merged into one weighted
//! row at their mean response, which leaves the gradient unchanged.

use rand::Rng;

use super::{check_dim, Row};
use crate::error::Result;
use crate::rng::rng_from_seed;

pub const MLP_EPOCHS: usize = 200;
pub const MLP_LEARNING_RATE: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct MlpModel {
    p: usize,
    h: usize,
    q: usize,
    /// `h × p`, row-major.
    w1: Vec<f64>,
    b1: Vec<f64>,
    /// `q × h`, row-major.
    w2: Vec<f64>,
    b2: Vec<f64>,
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    y_mean: Vec<f64>,
    y_scale: Vec<f64>,
}

fn column_stats(data: &[&[f64]], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = data.len() as f64;
    let mut mean = vec![0.0; dim];
    for row in data {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; dim];
    for row in data {
        for ((s, v), m) in var.iter_mut().zip(row.iter()).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let scale = var
        .into_iter()
        .map(|s| {
            let sd = (s / n).sqrt();
            if sd > 1e-12 { sd } else { 1.0 }
        })
        .collect();
    (mean, scale)
}

fn standardize(v: &[f64], mean: &[f64], scale: &[f64]) -> Vec<f64> {
    v.iter().zip(mean).zip(scale).map(|((x, m), s)| (x - m) / s).collect()
}

impl MlpModel {
    pub(crate) fn fit(rows: &[Row], width: usize, seed: u64) -> Self {
        Self::fit_inner(rows, width, seed, true)
    }

    fn fit_inner(rows: &[Row], width: usize, seed: u64, merge: bool) -> Self {
        let (p, q, h) = (rows[0].x.len(), rows[0].y.len(), width);
        let xs: Vec<&[f64]> = rows.iter().map(|r| r.x.as_slice()).collect();
        let ys: Vec<&[f64]> = rows.iter().map(|r| r.y.as_slice()).collect();
        let (x_mean, x_scale) = column_stats(&xs, p);
        let (y_mean, y_scale) = column_stats(&ys, q);

        // Rows arrive canonically sorted, so equal inputs are adjacent.
        let mut groups: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
        for r in rows {
            let y = standardize(&r.y, &y_mean, &y_scale);
            match groups.last_mut() {
                Some((gx, gy, w)) if merge && *gx == r.x => {
                    for (a, v) in gy.iter_mut().zip(&y) {
                        *a += v;
                    }
                    *w += 1.0;
                }
                _ => groups.push((r.x.clone(), y, 1.0)),
            }
        }
        let groups: Vec<(Vec<f64>, Vec<f64>, f64)> = groups
            .into_iter()
            .map(|(x, sum_y, w)| {
                let mean_y = sum_y.into_iter().map(|s| s / w).collect();
                (standardize(&x, &x_mean, &x_scale), mean_y, w)
            })
            .collect();

        let mut rng = rng_from_seed(seed);
        let mut uniform = |fan_in: usize, len: usize| -> Vec<f64> {
            let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
            (0..len).map(|_| rng.random_range(-bound..=bound)).collect()
        };
        let mut m = Self {
            p,
            h,
            q,
            w1: uniform(p, h * p),
            b1: uniform(p, h),
            w2: uniform(h, q * h),
            b2: uniform(h, q),
            x_mean,
            x_scale,
            y_mean,
            y_scale,
        };
        m.train(&groups, rows.len() as f64);
        m
    }

    fn train(&mut self, groups: &[(Vec<f64>, Vec<f64>, f64)], n: f64) {
        let (p, h, q) = (self.p, self.h, self.q);
        let mut hidden = vec![0.0; h];
        let mut out = vec![0.0; q];
        let mut d_out = vec![0.0; q];
        let mut d_hidden = vec![0.0; h];
        for _ in 0..MLP_EPOCHS {
            let mut g_w1 = vec![0.0; h * p];
            let mut g_b1 = vec![0.0; h];
            let mut g_w2 = vec![0.0; q * h];
            let mut g_b2 = vec![0.0; q];
            for (x, y, w) in groups {
                self.forward(x, &mut hidden, &mut out);
                let coef = w / n;
                for k in 0..q {
                    d_out[k] = coef * (out[k] - y[k]);
                    g_b2[k] += d_out[k];
                    let row = &mut g_w2[k * h..(k + 1) * h];
                    for (g, a) in row.iter_mut().zip(&hidden) {
                        *g += d_out[k] * a;
                    }
                }
                for j in 0..h {
                    d_hidden[j] = if hidden[j] > 0.0 {
                        (0..q).map(|k| d_out[k] * self.w2[k * h + j]).sum()
                    } else {
                        0.0
                    };
                    g_b1[j] += d_hidden[j];
                    let row = &mut g_w1[j * p..(j + 1) * p];
                    for (g, v) in row.iter_mut().zip(x) {
                        *g += d_hidden[j] * v;
                    }
                }
            }
            let step = |params: &mut [f64], grads: &[f64]| {
                for (w, g) in params.iter_mut().zip(grads) {
                    *w -= MLP_LEARNING_RATE * g;
                }
            };
            step(&mut self.w1, &g_w1);
            step(&mut self.b1, &g_b1);
            step(&mut self.w2, &g_w2);
            step(&mut self.b2, &g_b2);
        }
    }

    fn forward(&self, x: &[f64], hidden: &mut [f64], out: &mut [f64]) {
        let (p, h) = (self.p, self.h);
        for j in 0..h {
            let pre: f64 = self.b1[j] + self.w1[j * p..(j + 1) * p].iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
            hidden[j] = pre.max(0.0);
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.b2[k] + self.w2[k * h..(k + 1) * h].iter().zip(hidden.iter()).map(|(w, a)| w * a).sum::<f64>();
        }
    }

    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.p, x)?;
        let xs = standardize(x, &self.x_mean, &self.x_scale);
        let mut hidden = vec![0.0; self.h];
        let mut out = vec![0.0; self.q];
        self.forward(&xs, &mut hidden, &mut out);
        Ok(out
            .iter()
            .zip(&self.y_mean)
            .zip(&self.y_scale)
            .map(|((o, m), s)| o * s + m)
            .collect())
    }
}
