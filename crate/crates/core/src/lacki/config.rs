use serde::{Deserialize, Serialize};

use crate::error::{LackiError, Result};
use crate::ext_real;
use crate::metric::InputMetric;

/// Hyperparameters of the kinky inference rule.
///
/// `alpha` is the Hölder exponent, `lambda` the noise regularizer of the
/// constant estimator, `l_floor` the lower limit of the estimated constant
/// and `e_bar` the constant error belief added to both envelopes. Bounds are
/// optional per-output-component clipping values for the ceiling and floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KiConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub l_floor: f64,
    pub e_bar: f64,
    #[serde(with = "ext_real::opt_vec", skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<Vec<f64>>,
    #[serde(with = "ext_real::opt_vec", skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<Vec<f64>>,
    pub metric: InputMetric,
}

impl Default for KiConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            lambda: 0.0,
            l_floor: 0.0,
            e_bar: 0.0,
            lower_bound: None,
            upper_bound: None,
            metric: InputMetric::MaxNorm,
        }
    }
}

impl KiConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_l_floor(mut self, l_floor: f64) -> Self {
        self.l_floor = l_floor;
        self
    }

    pub fn with_e_bar(mut self, e_bar: f64) -> Self {
        self.e_bar = e_bar;
        self
    }

    pub fn with_bounds(mut self, lower: Option<Vec<f64>>, upper: Option<Vec<f64>>) -> Self {
        self.lower_bound = lower;
        self.upper_bound = upper;
        self
    }

    pub fn with_metric(mut self, metric: InputMetric) -> Self {
        self.metric = metric;
        self
    }

    /// Scalar invariants that do not depend on the data dimensions.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(LackiError::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        for (name, v) in [("lambda", self.lambda), ("l_floor", self.l_floor), ("e_bar", self.e_bar)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(LackiError::InvalidConfig(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if let (Some(lo), Some(hi)) = (&self.lower_bound, &self.upper_bound) {
            if lo.len() != hi.len() {
                return Err(LackiError::DimensionMismatch {
                    context: "bound vectors",
                    expected: lo.len(),
                    actual: hi.len(),
                });
            }
            if lo.iter().zip(hi).any(|(l, h)| !(l <= h)) {
                return Err(LackiError::InvalidConfig(
                    "lower_bound must not exceed upper_bound componentwise".into(),
                ));
            }
        }
        for b in [&self.lower_bound, &self.upper_bound].into_iter().flatten() {
            if b.iter().any(|v| v.is_nan()) {
                return Err(LackiError::InvalidConfig("bounds must not be NaN".into()));
            }
        }
        Ok(())
    }

    /// Full validation against data dimensions `d` (input) and `m` (output).
    pub fn validate_for(&self, d: usize, m: usize) -> Result<()> {
        self.validate()?;
        self.metric.validate(d)?;
        for b in [&self.lower_bound, &self.upper_bound].into_iter().flatten() {
            if b.len() != m {
                return Err(LackiError::DimensionMismatch {
                    context: "bound vector",
                    expected: m,
                    actual: b.len(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn lower(&self, j: usize) -> f64 {
        self.lower_bound.as_ref().map_or(f64::NEG_INFINITY, |b| b[j])
    }

    pub(crate) fn upper(&self, j: usize) -> f64 {
        self.upper_bound.as_ref().map_or(f64::INFINITY, |b| b[j])
    }
}
