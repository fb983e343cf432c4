//! The lazily adapted Hölder constant.
//!
//! For a dataset the estimate is
//!
//! ```text
//! ell = max( l_floor, max_{d(s,s') > 0} (|f(s) - f(s')|_inf - lambda) / d(s,s')^alpha )
//! ```
//!
//! Pairs at exactly zero input distance are skipped. The incremental form in
//! [`max_slope_cross`] / [`max_slope_within`] scans only pairs touching newly
//! arrived rows, so appending `k` rows to `n` costs `O(k*n + k^2)` metric
//! evaluations.

use super::KiConfig;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::metric::output_distance;

#[inline]
pub(crate) fn pair_slope(config: &KiConfig, x: &[f64], y: &[f64], xp: &[f64], yp: &[f64]) -> Option<f64> {
    let dist = config.metric.distance(x, xp);
    if dist == 0.0 {
        return None;
    }
    let denom = if config.alpha == 1.0 { dist } else { dist.powf(config.alpha) };
    Some((output_distance(y, yp) - config.lambda) / denom)
}

/// Largest slope over pairs with one row in `old` and one in `new`.
pub(crate) fn max_slope_cross(
    config: &KiConfig,
    data: &Dataset,
    old: std::ops::Range<usize>,
    new: std::ops::Range<usize>,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for j in new {
        let (xj, yj) = (data.input(j), data.observation(j));
        for i in old.clone() {
            if let Some(s) = pair_slope(config, data.input(i), data.observation(i), xj, yj) {
                best = best.max(s);
            }
        }
    }
    best
}

/// Largest slope over unordered pairs inside `rows`.
pub(crate) fn max_slope_within(config: &KiConfig, data: &Dataset, rows: std::ops::Range<usize>) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for j in rows.clone() {
        let (xj, yj) = (data.input(j), data.observation(j));
        for i in rows.start..j {
            if let Some(s) = pair_slope(config, data.input(i), data.observation(i), xj, yj) {
                best = best.max(s);
            }
        }
    }
    best
}

/// Batch estimate of the Hölder constant over all pairs of `data`.
///
/// Returns `config.l_floor` when no pair has positive distance.
pub fn estimate_constant_batch(data: &Dataset, config: &KiConfig) -> Result<f64> {
    config.validate_for(data.input_dim(), data.output_dim())?;
    Ok(config.l_floor.max(max_slope_within(config, data, 0..data.len())))
}
