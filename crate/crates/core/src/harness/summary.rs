//! Coverage and radius statistics per (method, predictor).

use serde::{Deserialize, Serialize};

use super::config::Method;
use super::trials::TrialRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub predictor: String,
    pub trials: usize,
    pub coverage_mean: f64,
    /// `sqrt(p̂(1 - p̂) / trials)`.
    pub coverage_se: f64,
    /// Over finite radii only; `None` when every radius was infinite.
    pub mean_finite_radius: Option<f64>,
    /// Sample standard deviation of the finite radii over the square root of their count.
    pub radius_se: Option<f64>,
    pub infinite_radius_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn get(&self, method: Method, predictor: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.method == method && r.predictor == predictor)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Groups records by (method, predictor) in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::Empty("no trial records to summarize"));
    }
    let mut keys: Vec<(Method, &str)> = Vec::new();
    for r in records {
        if !keys.iter().any(|&(m, p)| m == r.method && p == r.predictor) {
            keys.push((r.method, &r.predictor));
        }
    }
    let rows = keys
        .into_iter()
        .map(|(method, predictor)| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.method == method && r.predictor == predictor).collect();
            let trials = group.len();
            let p = group.iter().filter(|r| r.covered).count() as f64 / trials as f64;
            let finite: Vec<f64> = group.iter().filter_map(|r| r.radius.finite()).collect();
            let (mean, se) = match finite.len() {
                0 => (None, None),
                1 => (Some(finite[0]), Some(0.0)),
                k => {
                    let mean = finite.iter().sum::<f64>() / k as f64;
                    let var = finite.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
                    (Some(mean), Some((var / k as f64).sqrt()))
                }
            };
            SummaryRow {
                method,
                predictor: predictor.to_string(),
                trials,
                coverage_mean: p,
                coverage_se: (p * (1.0 - p) / trials as f64).sqrt(),
                mean_finite_radius: mean,
                radius_se: se,
                infinite_radius_count: trials - finite.len(),
            }
        })
        .collect();
    Ok(Summary { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::ExtendedReal;

    fn rec(covered: bool, radius: ExtendedReal) -> TrialRecord {
        TrialRecord { method: Method::Lwo, predictor: "knn:2".into(), trial: 0, seed: 0, covered, radius, wall_ms: 0.0 }
    }

    #[test]
    fn empty_is_an_error() {
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn all_covered() {
        let s = summarize(&vec![rec(true, ExtendedReal::Finite(1.0)); 5]).unwrap();
        assert_eq!((s.rows[0].coverage_mean, s.rows[0].coverage_se), (1.0, 0.0));
    }

    #[test]
    fn alternating_coverage_se() {
        let r: Vec<_> = [true, false, true, false].iter().map(|&c| rec(c, ExtendedReal::Finite(1.0))).collect();
        let s = summarize(&r).unwrap();
        assert_eq!(s.rows[0].coverage_mean, 0.5);
        assert_eq!(s.rows[0].coverage_se, 0.25);
    }

    #[test]
    fn infinite_radii_are_counted_not_averaged() {
        let r = vec![rec(true, ExtendedReal::Finite(1.0)), rec(true, ExtendedReal::Finite(2.0)), rec(true, ExtendedReal::Infinite)];
        let s = summarize(&r).unwrap();
        assert_eq!(s.rows[0].mean_finite_radius, Some(1.5));
        assert_eq!(s.rows[0].infinite_radius_count, 1);
        // sd of (1, 2) is 1/√2, over √2.
        assert!((s.rows[0].radius_se.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn groups_keep_first_appearance_order() {
        let mut r = vec![rec(true, ExtendedReal::Finite(1.0))];
        r.push(TrialRecord { method: Method::Split, ..rec(false, ExtendedReal::Finite(3.0)) });
        r.push(rec(false, ExtendedReal::Finite(1.0)));
        let s = summarize(&r).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert_eq!((s.rows[0].method, s.rows[0].trials), (Method::Lwo, 2));
        assert!(s.get(Method::Split, "knn:2").is_some());
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert!(v["rows"][0].get("infinite_radius_count").is_some());
    }
}
