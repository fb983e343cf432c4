//! Kinky inference with a lazily adapted Hölder constant.
//!
//! A [`LackiState`] holds the data, the configuration and the current
//! constant estimate `ell`. Predictions are the midpoint between the
//! tightest Hölder-consistent ceiling and floor through the data; the
//! half-distance between them is reported as the uncertainty.
//!
//! ```
//! use lacki::{Dataset, KiConfig, LackiState};
//!
//! let data = Dataset::from_scalar_pairs(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
//! let model = LackiState::fit(data, KiConfig::default()).unwrap();
//! assert_eq!(model.ell(), 1.0);
//! let p = model.predict(&[0.5]).unwrap();
//! assert_eq!(p.value, vec![0.5]);
//! assert_eq!(p.halfwidth, vec![0.0]);
//! ```

mod config;
mod estimator;

use serde::{Deserialize, Serialize};

pub use config::KiConfig;
pub use estimator::estimate_constant_batch;

use crate::dataset::Dataset;
use crate::error::{LackiError, Result};
use crate::ext_real;

/// Output of a single query.
///
/// `ceiling` and `floor` are already clipped by the configured bounds.
/// Contradictory data can make `ceiling < floor`; the halfwidth is then
/// negative and returned as is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub value: Vec<f64>,
    pub halfwidth: Vec<f64>,
    #[serde(with = "ext_real::vec")]
    pub ceiling: Vec<f64>,
    #[serde(with = "ext_real::vec")]
    pub floor: Vec<f64>,
}

/// A fitted LACKI model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LackiState {
    config: KiConfig,
    data: Dataset,
    ell: f64,
}

impl LackiState {
    /// Batch fit: computes `ell` over all pairs of `data`.
    pub fn fit(data: Dataset, config: KiConfig) -> Result<Self> {
        let ell = estimate_constant_batch(&data, &config)?;
        Ok(Self { config, data, ell })
    }

    /// Empty model with the given dimensions; `ell` starts at the floor.
    pub fn empty(d: usize, m: usize, config: KiConfig) -> Result<Self> {
        Self::fit(Dataset::new(d, m)?, config)
    }

    /// Reassembles a model from stored parts, checking that `ell` matches
    /// the batch estimate of `data` to relative tolerance `1e-12`.
    pub fn from_parts(config: KiConfig, data: Dataset, ell: f64) -> Result<Self> {
        let expected = estimate_constant_batch(&data, &config)?;
        if !(ell.is_finite() && (ell - expected).abs() <= 1e-12 * expected.abs().max(1.0)) {
            return Err(LackiError::InvalidConfig(format!(
                "stored constant {ell} does not match the data estimate {expected}"
            )));
        }
        Ok(Self { config, data, ell })
    }

    pub fn config(&self) -> &KiConfig {
        &self.config
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// Current Hölder constant estimate.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Appends `batch` and raises `ell` using only pairs that involve the new
    /// rows. The state is left untouched if the batch is rejected.
    pub fn update_constant(&mut self, batch: &Dataset) -> Result<()> {
        self.data.check_dims(batch.input_dim(), batch.output_dim())?;
        if batch.is_empty() {
            return Ok(());
        }
        let old = self.data.len();
        self.data.append(batch)?;
        let new = old..self.data.len();
        let cross = estimator::max_slope_cross(&self.config, &self.data, 0..old, new.clone());
        let within = estimator::max_slope_within(&self.config, &self.data, new);
        self.ell = self.ell.max(cross).max(within);
        Ok(())
    }

    /// Single-pair form of [`LackiState::update_constant`].
    pub fn add_observation(&mut self, x: &[f64], y: &[f64]) -> Result<()> {
        self.data.check_pair(x, y)?;
        let old = self.data.len();
        self.data.push(x, y)?;
        let cross = estimator::max_slope_cross(&self.config, &self.data, 0..old, old..old + 1);
        self.ell = self.ell.max(cross);
        Ok(())
    }

    /// Ceiling/floor envelopes, clipped by the bounds, for one query.
    ///
    /// Writes the clipped ceiling and floor of every output component into
    /// the given buffers. Cost is one metric evaluation per stored sample.
    fn envelopes(&self, query: &[f64], ceiling: &mut [f64], floor: &mut [f64]) -> Result<()> {
        let d = self.data.input_dim();
        if query.len() != d {
            return Err(LackiError::DimensionMismatch {
                context: "query",
                expected: d,
                actual: query.len(),
            });
        }
        if let Some(column) = query.iter().position(|v| !v.is_finite()) {
            return Err(LackiError::NonFinite {
                context: "query",
                row: 0,
                column,
            });
        }
        ceiling.fill(f64::INFINITY);
        floor.fill(f64::NEG_INFINITY);
        let (alpha, ell, e_bar) = (self.config.alpha, self.ell, self.config.e_bar);
        for (x, y) in self.data.iter() {
            let dist = self.config.metric.distance(query, x);
            let reach = if alpha == 1.0 { ell * dist } else { ell * dist.powf(alpha) } + e_bar;
            for ((c, f), &yj) in ceiling.iter_mut().zip(floor.iter_mut()).zip(y) {
                *c = c.min(yj + reach);
                *f = f.max(yj - reach);
            }
        }
        for j in 0..ceiling.len() {
            ceiling[j] = ceiling[j].min(self.config.upper(j));
            floor[j] = floor[j].max(self.config.lower(j));
        }
        Ok(())
    }

    /// Prediction, uncertainty and clipped envelopes at `query`.
    pub fn predict(&self, query: &[f64]) -> Result<Prediction> {
        let m = self.data.output_dim();
        let mut ceiling = vec![0.0; m];
        let mut floor = vec![0.0; m];
        self.envelopes(query, &mut ceiling, &mut floor)?;
        let mut value = Vec::with_capacity(m);
        let mut halfwidth = Vec::with_capacity(m);
        for (j, (&c, &f)) in ceiling.iter().zip(&floor).enumerate() {
            let v = 0.5 * c + 0.5 * f;
            if !v.is_finite() {
                return Err(LackiError::PredictionUndefined(format!(
                    "component {j} has ceiling {c} and floor {f}"
                )));
            }
            value.push(v);
            halfwidth.push(0.5 * c - 0.5 * f);
        }
        Ok(Prediction {
            value,
            halfwidth,
            ceiling,
            floor,
        })
    }

    /// Predicted value only, for scalar-output models.
    pub fn predict_scalar(&self, query: &[f64]) -> Result<f64> {
        if self.data.output_dim() != 1 {
            return Err(LackiError::DimensionMismatch {
                context: "scalar prediction output",
                expected: 1,
                actual: self.data.output_dim(),
            });
        }
        let (mut c, mut f) = ([0.0], [0.0]);
        self.envelopes(query, &mut c, &mut f)?;
        let v = 0.5 * c[0] + 0.5 * f[0];
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LackiError::PredictionUndefined(format!(
                "ceiling {} and floor {}",
                c[0], f[0]
            )))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateRepr {
    config: KiConfig,
    data: Dataset,
    ell: f64,
}

impl<'de> Deserialize<'de> for LackiState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        LackiState::from_parts(repr.config, repr.data, repr.ell).map_err(serde::de::Error::custom)
    }
}
