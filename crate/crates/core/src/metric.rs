//! Input-space (pseudo-)metrics.
//!
//! The output space is always compared with the max-norm; only the input
//! metric is selectable.

use serde::{Deserialize, Serialize};

use crate::error::{LackiError, Result};

/// Metric on the input space used by the estimator and the envelopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputMetric {
    /// `max_k |x_k - y_k|`
    #[default]
    MaxNorm,
    /// `sqrt(sum_k (x_k - y_k)^2)`
    EuclideanNorm,
    /// `max_k w_k |x_k - y_k|` with strictly positive weights.
    WeightedMaxNorm { weights: Vec<f64> },
}

impl InputMetric {
    /// Distance between two points of equal length. Lengths are the caller's
    /// responsibility; use [`InputMetric::validate`] once per dimension.
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            InputMetric::MaxNorm => a
                .iter()
                .zip(b)
                .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs())),
            InputMetric::EuclideanNorm => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            InputMetric::WeightedMaxNorm { weights } => a
                .iter()
                .zip(b)
                .zip(weights)
                .fold(0.0_f64, |acc, ((x, y), w)| acc.max(w * (x - y).abs())),
        }
    }

    /// Checks that the metric is usable on inputs of dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        if let InputMetric::WeightedMaxNorm { weights } = self {
            if weights.len() != d {
                return Err(LackiError::DimensionMismatch {
                    context: "metric weights",
                    expected: d,
                    actual: weights.len(),
                });
            }
            if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(LackiError::InvalidConfig(
                    "metric weights must be finite and strictly positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Max-norm distance between two output vectors.
#[inline]
pub fn output_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}
