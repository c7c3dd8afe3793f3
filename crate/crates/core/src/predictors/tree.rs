//! CART regression tree with multi-output squared-error splits.

use super::{check_dim, mean_response, Row};
use crate::error::Result;

#[derive(Debug, Clone)]
enum Node {
    Leaf(Vec<f64>),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct TreeModel {
    nodes: Vec<Node>,
    x_dim: usize,
}

struct Builder<'a> {
    rows: &'a [Row],
    max_depth: usize,
    min_leaf: usize,
    nodes: Vec<Node>,
}

/// Sum over outputs of `(Σ y)² / count`; the within-node squared error is
/// `Σ‖y‖² - fit_term`, so larger is better.
fn fit_term(sums: &[f64], count: usize) -> f64 {
    sums.iter().map(|s| s * s).sum::<f64>() / count as f64
}

impl Builder<'_> {
    fn build(&mut self, members: Vec<usize>, depth: usize) -> usize {
        let dy = self.rows[0].y.len();
        let leaf = |b: &mut Self, members: &[usize]| {
            let value = mean_response(members.iter().map(|&i| &b.rows[i]), dy);
            b.nodes.push(Node::Leaf(value));
            b.nodes.len() - 1
        };
        if depth >= self.max_depth || members.len() < 2 * self.min_leaf {
            return leaf(self, &members);
        }
        let Some((feature, threshold)) = self.best_split(&members) else {
            return leaf(self, &members);
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            members.iter().partition(|&&i| self.rows[i].x[feature] <= threshold);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf(Vec::new()));
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[slot] = Node::Split { feature, threshold, left, right };
        slot
    }

    /// The split with the lowest total squared error among midpoints of
    /// consecutive distinct feature values. Only strict improvements replace
    /// the incumbent, so ties go to the lowest `(feature, threshold)`.
    fn best_split(&self, members: &[usize]) -> Option<(usize, f64)> {
        let (dx, dy, n) = (self.rows[0].x.len(), self.rows[0].y.len(), members.len());
        let mut total = vec![0.0; dy];
        for &i in members {
            for (t, v) in total.iter_mut().zip(&self.rows[i].y) {
                *t += v;
            }
        }
        let parent = fit_term(&total, n);
        let mut best_gain = parent + 1e-12 * parent.abs().max(1.0);
        let mut best = None;
        let mut order = members.to_vec();
        let mut left = vec![0.0; dy];
        let mut right = vec![0.0; dy];
        for f in 0..dx {
            order.sort_by(|&a, &b| self.rows[a].x[f].total_cmp(&self.rows[b].x[f]).then(a.cmp(&b)));
            left.iter_mut().for_each(|v| *v = 0.0);
            for (pos, &i) in order[..n - 1].iter().enumerate() {
                for (l, v) in left.iter_mut().zip(&self.rows[i].y) {
                    *l += v;
                }
                let (a, b) = (self.rows[i].x[f], self.rows[order[pos + 1]].x[f]);
                let n_left = pos + 1;
                if a == b || n_left < self.min_leaf || n - n_left < self.min_leaf {
                    continue;
                }
                for ((r, t), l) in right.iter_mut().zip(&total).zip(&left) {
                    *r = t - l;
                }
                let gain = fit_term(&left, n_left) + fit_term(&right, n - n_left);
                if gain > best_gain {
                    best_gain = gain;
                    let mid = a + (b - a) / 2.0;
                    best = Some((f, if mid < b { mid } else { a }));
                }
            }
        }
        best
    }
}

impl TreeModel {
    pub(crate) fn fit(rows: &[Row], max_depth: usize, min_leaf: usize) -> Self {
        let mut b = Builder {
            rows,
            max_depth,
            min_leaf,
            nodes: Vec::new(),
        };
        b.build((0..rows.len()).collect(), 0);
        Self {
            nodes: b.nodes,
            x_dim: rows[0].x.len(),
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub(crate) fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.x_dim, x)?;
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf(v) => return Ok(v.clone()),
                Node::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(data: &[(&[f64], f64)]) -> Vec<Row> {
        data.iter()
            .enumerate()
            .map(|(i, (x, y))| Row { x: x.to_vec(), y: vec![*y], index: i + 1 })
            .collect()
    }

    #[test]
    fn splits_step_function_at_midpoint() {
        let r = rows(&[(&[0.0], 1.0), (&[1.0], 1.0), (&[2.0], 5.0), (&[3.0], 5.0)]);
        let t = TreeModel::fit(&r, 3, 1);
        assert_eq!(t.predict(&[1.49]).unwrap(), vec![1.0]);
        assert_eq!(t.predict(&[1.51]).unwrap(), vec![5.0]);
        // Pure children are not split further.
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn respects_min_leaf_and_depth() {
        let r = rows(&[(&[0.0], 0.0), (&[1.0], 10.0), (&[2.0], 10.0), (&[3.0], 10.0)]);
        let t = TreeModel::fit(&r, 3, 2);
        // The best split isolates point 0, but min_leaf = 2 forces the 2|2 split.
        assert_eq!(t.predict(&[0.0]).unwrap(), vec![5.0]);
        let stump = TreeModel::fit(&r, 1, 1);
        assert_eq!(stump.depth(), 1);
    }

    #[test]
    fn equal_gains_go_to_lowest_feature() {
        // Both features separate the responses identically.
        let r = rows(&[(&[0.0, 0.0], 0.0), (&[1.0, 1.0], 4.0)]);
        let t = TreeModel::fit(&r, 1, 1);
        assert_eq!(t.predict(&[0.0, 1.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn constant_response_is_a_leaf() {
        let r = rows(&[(&[0.0], 2.0), (&[1.0], 2.0), (&[2.0], 2.0)]);
        assert_eq!(TreeModel::fit(&r, 5, 1).depth(), 0);
    }
}
