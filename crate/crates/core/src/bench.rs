//! Regression benchmarks on synthetic targets.
//!
//! Each repeat draws a training set uniformly on `[0,1]^d`, perturbs the
//! observations with uniform noise, fits every learner on the same data and
//! scores it against the noise-free target on fresh uniform test inputs.
//! Learners are LACKI with the configured regulariser, LACKI with an
//! alternative regulariser (`lacki2`, by default `lambda = 0`) and an affine
//! least-squares fit.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{LackiError, Result};
use crate::lacki::{KiConfig, LackiState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// `|cos(2 pi x1)| + x1`.
    F1,
    /// `sin(x1) sin(x2) + 0.05 (sin(5 x1) sin(5 x2))^3`; needs `d >= 2`.
    F2,
    Constant { value: f64 },
}

impl Target {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Target::F1 => (std::f64::consts::TAU * x[0]).cos().abs() + x[0],
            Target::F2 => {
                let s = (5.0 * x[0]).sin() * (5.0 * x[1]).sin();
                x[0].sin() * x[1].sin() + 0.05 * s * s * s
            }
            Target::Constant { value } => value,
        }
    }

    /// Upper bound on the Lipschitz constant w.r.t. the max-norm on `[0,1]^d`.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            Target::F1 => std::f64::consts::TAU + 1.0,
            // each partial derivative is at most 1 + 0.05 * 3 * 5
            Target::F2 => 2.0 * 1.75,
            Target::Constant { .. } => 0.0,
        }
    }

    pub fn min_dim(&self) -> usize {
        match self {
            Target::F2 => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    pub target: Target,
    pub d: usize,
    pub n_train: usize,
    /// Half-width of the uniform observation noise.
    pub noise_halfwidth: f64,
    pub n_test: usize,
    pub n_repeats: usize,
    pub learner: KiConfig,
    /// Regulariser of the second LACKI learner; `None` drops it.
    pub lacki2_lambda: Option<f64>,
    pub include_linear: bool,
    pub seed: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            target: Target::F1,
            d: 2,
            n_train: 1025,
            noise_halfwidth: 0.5,
            n_test: 25_000,
            n_repeats: 30,
            learner: KiConfig::default().with_lambda(1.0),
            lacki2_lambda: Some(0.0),
            include_linear: true,
            seed: 0,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LackiError::InvalidConfig(msg));
        if self.d < self.target.min_dim() {
            return bad(format!("target {:?} needs d >= {}", self.target, self.target.min_dim()));
        }
        if self.n_test == 0 || self.n_repeats == 0 {
            return bad("n_test and n_repeats must be >= 1".into());
        }
        if !(self.noise_halfwidth.is_finite() && self.noise_halfwidth >= 0.0) {
            return bad(format!("noise_halfwidth must be >= 0, got {}", self.noise_halfwidth));
        }
        if let Target::Constant { value } = self.target {
            if !value.is_finite() {
                return bad("constant target must be finite".into());
            }
        }
        self.learner.validate_for(self.d, 1)?;
        if let Some(l) = self.lacki2_lambda {
            self.learner.clone().with_lambda(l).validate()?;
        }
        Ok(())
    }

    fn learners(&self) -> Vec<(&'static str, Option<KiConfig>)> {
        let mut out = vec![("lacki", Some(self.learner.clone()))];
        if let Some(l) = self.lacki2_lambda {
            out.push(("lacki2", Some(self.learner.clone().with_lambda(l))));
        }
        if self.include_linear {
            out.push(("linear", None));
        }
        out
    }
}

/// Scores of one learner in one repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatMetrics {
    pub repeat: usize,
    pub learner: String,
    pub rms: f64,
    pub me: f64,
    /// Log of training seconds (median of three fits).
    pub log_tt: f64,
    /// Log of prediction seconds per test input.
    pub log_pt: f64,
    /// Fitted constant, for LACKI learners.
    pub ell: Option<f64>,
}

/// Mean and sample standard deviation over repeats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    pub learner: String,
    pub rms: Summary,
    pub me: Summary,
    pub log_tt: Summary,
    pub log_pt: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub bundles: Vec<MetricBundle>,
    pub repeats: Vec<RepeatMetrics>,
}

impl ExperimentResult {
    pub fn bundle(&self, learner: &str) -> Option<&MetricBundle> {
        self.bundles.iter().find(|b| b.learner == learner)
    }

    /// Copy with timing fields zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        let zero = Summary { mean: 0.0, std: 0.0 };
        Self {
            bundles: self
                .bundles
                .iter()
                .map(|b| MetricBundle {
                    log_tt: zero,
                    log_pt: zero,
                    ..b.clone()
                })
                .collect(),
            repeats: self
                .repeats
                .iter()
                .map(|r| RepeatMetrics {
                    log_tt: 0.0,
                    log_pt: 0.0,
                    ..r.clone()
                })
                .collect(),
        }
    }
}

fn uniform_inputs(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect()
}

/// Noisy training set of repeat `r`.
pub fn draw_training_set(spec: &ExperimentSpec, repeat: usize) -> Result<Dataset> {
    let mut rng = repeat_rng(spec, repeat);
    training_set(spec, &mut rng)
}

fn repeat_rng(spec: &ExperimentSpec, repeat: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(repeat as u64);
    rng
}

fn training_set(spec: &ExperimentSpec, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let inputs = uniform_inputs(rng, spec.n_train, spec.d);
    let obs: Vec<Vec<f64>> = inputs
        .iter()
        .map(|x| {
            let noise = if spec.noise_halfwidth > 0.0 {
                rng.gen_range(-spec.noise_halfwidth..=spec.noise_halfwidth)
            } else {
                0.0
            };
            vec![spec.target.eval(x) + noise]
        })
        .collect();
    Dataset::from_rows(spec.d, 1, &inputs, &obs)
}

fn timed<T>(f: impl Fn() -> Result<T>) -> Result<(T, f64)> {
    let mut times = [0.0; 3];
    let mut out = None;
    for t in &mut times {
        let clock = Instant::now();
        out = Some(f()?);
        *t = clock.elapsed().as_secs_f64();
    }
    times.sort_by(f64::total_cmp);
    Ok((out.expect("three fits"), times[1]))
}

fn score(errors: &[f64]) -> (f64, f64) {
    let rms = (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt();
    let me = errors.iter().copied().fold(0.0, f64::max);
    (rms, me)
}

fn run_repeat(spec: &ExperimentSpec, repeat: usize) -> Result<Vec<RepeatMetrics>> {
    let mut rng = repeat_rng(spec, repeat);
    let train = training_set(spec, &mut rng)?;
    let test = uniform_inputs(&mut rng, spec.n_test, spec.d);
    let truth: Vec<f64> = test.iter().map(|x| spec.target.eval(x)).collect();

    let mut out = Vec::new();
    for (name, config) in spec.learners() {
        let mut errors = Vec::with_capacity(test.len());
        let (tt, pt, ell) = match config {
            Some(config) => {
                let (model, tt) = timed(|| LackiState::fit(train.clone(), config.clone()))?;
                let clock = Instant::now();
                for (x, y) in test.iter().zip(&truth) {
                    errors.push((model.predict_scalar(x)? - y).abs());
                }
                (tt, clock.elapsed().as_secs_f64(), Some(model.ell()))
            }
            None => {
                let (model, tt) = timed(|| linear_baseline_fit(&train))?;
                let clock = Instant::now();
                for (x, y) in test.iter().zip(&truth) {
                    errors.push((model.predict(x)[0] - y).abs());
                }
                (tt, clock.elapsed().as_secs_f64(), None)
            }
        };
        let (rms, me) = score(&errors);
        out.push(RepeatMetrics {
            repeat,
            learner: name.to_string(),
            rms,
            me,
            log_tt: tt.max(1e-12).ln(),
            log_pt: (pt / spec.n_test as f64).max(1e-15).ln(),
            ell,
        });
    }
    Ok(out)
}

/// Runs all repeats (in parallel) and aggregates per learner.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let per_repeat = (0..spec.n_repeats)
        .into_par_iter()
        .map(|r| run_repeat(spec, r))
        .collect::<Result<Vec<_>>>()?;
    let repeats: Vec<RepeatMetrics> = per_repeat.into_iter().flatten().collect();
    let bundles = spec
        .learners()
        .into_iter()
        .map(|(name, _)| {
            let rows: Vec<&RepeatMetrics> = repeats.iter().filter(|r| r.learner == name).collect();
            let col = |f: fn(&RepeatMetrics) -> f64| Summary::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
            MetricBundle {
                learner: name.to_string(),
                rms: col(|r| r.rms),
                me: col(|r| r.me),
                log_tt: col(|r| r.log_tt),
                log_pt: col(|r| r.log_pt),
            }
        })
        .collect();
    Ok(ExperimentResult { bundles, repeats })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub result: ExperimentResult,
}

/// One experiment per input dimension, otherwise identical to `base`.
pub fn run_dimension_sweep(base: &ExperimentSpec, dims: &[usize]) -> Result<Vec<SweepRow>> {
    dims.iter()
        .map(|&d| {
            let mut spec = base.clone();
            spec.d = d;
            Ok(SweepRow {
                d,
                result: run_experiment(&spec)?,
            })
        })
        .collect()
}

/// `x -> W x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineModel {
    /// One row of `d` coefficients per output.
    pub weights: Vec<Vec<f64>>,
    pub intercept: Vec<f64>,
}

impl AffineModel {
    pub fn predict(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.intercept)
            .map(|(w, b)| b + w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>())
            .collect()
    }
}

/// Least-squares affine fit with minimum-norm slopes.
///
/// Data are centred so the intercept is never penalised; rank-deficient
/// designs (including fewer than `d + 1` points) get the minimum-norm slope
/// from the SVD pseudo-inverse. A single point yields a constant model.
pub fn linear_baseline_fit(data: &Dataset) -> Result<AffineModel> {
    let (n, d, m) = (data.len(), data.input_dim(), data.output_dim());
    if n == 0 {
        return Ok(AffineModel {
            weights: vec![vec![0.0; d]; m],
            intercept: vec![0.0; m],
        });
    }
    let x = DMatrix::from_fn(n, d, |i, j| data.input(i)[j]);
    let y = DMatrix::from_fn(n, m, |i, j| data.observation(i)[j]);
    let x_mean: DVector<f64> = x.row_mean().transpose();
    let y_mean: DVector<f64> = y.row_mean().transpose();
    let xc = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - x_mean[j]);
    let yc = DMatrix::from_fn(n, m, |i, j| y[(i, j)] - y_mean[j]);
    let svd = xc.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = (n.max(d) as f64) * smax * f64::EPSILON;
    let w = if smax > 0.0 {
        svd.solve(&yc, eps)
            .map_err(|e| LackiError::InvalidConfig(format!("least squares failed: {e}")))?
    } else {
        DMatrix::zeros(d, m)
    };
    let intercept = (0..m)
        .map(|j| y_mean[j] - (0..d).map(|k| w[(k, j)] * x_mean[k]).sum::<f64>())
        .collect();
    let weights = (0..m).map(|j| (0..d).map(|k| w[(k, j)]).collect()).collect();
    Ok(AffineModel { weights, intercept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets() {
        assert_eq!(Target::F1.eval(&[0.0]), 1.0);
        assert!((Target::F1.eval(&[0.25]) - 0.25).abs() < 1e-15);
        assert_eq!(Target::F2.eval(&[0.0, 0.3]), 0.0);
    }

    #[test]
    fn affine_data_recovered() {
        let xs: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (i * i) as f64 * 0.1]).collect();
        let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![2.0 * x[0] - 3.0 * x[1] + 0.5]).collect();
        let data = Dataset::from_rows(2, 1, &xs, &ys).unwrap();
        let model = linear_baseline_fit(&data).unwrap();
        assert!((model.weights[0][0] - 2.0).abs() < 1e-10);
        assert!((model.weights[0][1] + 3.0).abs() < 1e-10);
        assert!((model.intercept[0] - 0.5).abs() < 1e-10);
        for (x, y) in xs.iter().zip(&ys) {
            assert!((model.predict(x)[0] - y[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn single_point_gives_constant() {
        let data = Dataset::from_rows(3, 1, &[vec![0.2, 0.4, 0.9]], &[vec![1.7]]).unwrap();
        let model = linear_baseline_fit(&data).unwrap();
        assert_eq!(model.weights[0], vec![0.0; 3]);
        assert_eq!(model.predict(&[5.0, -1.0, 2.0]), vec![1.7]);
    }

    #[test]
    fn rank_deficient_uses_min_norm() {
        // x2 == x1, so any split a + b = 1 fits; min norm is a = b = 0.5
        let xs: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64, i as f64]).collect();
        let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0]]).collect();
        let model = linear_baseline_fit(&Dataset::from_rows(2, 1, &xs, &ys).unwrap()).unwrap();
        assert!((model.weights[0][0] - 0.5).abs() < 1e-12);
        assert!((model.weights[0][1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn summary_is_sample_std() {
        let s = Summary::of(&[1.0, 2.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.std, 1.0);
        assert_eq!(Summary::of(&[4.0]).std, 0.0);
    }

    #[test]
    fn small_experiment_is_reproducible() {
        let spec = ExperimentSpec {
            n_train: 65,
            n_test: 200,
            n_repeats: 3,
            ..ExperimentSpec::default()
        };
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.without_timings(), b.without_timings());
        assert_eq!(a.repeats.len(), 9);
        for r in &a.repeats {
            assert!(r.me >= r.rms);
        }
    }

    #[test]
    fn f2_needs_two_dimensions() {
        let spec = ExperimentSpec {
            target: Target::F2,
            d: 1,
            ..ExperimentSpec::default()
        };
        assert!(run_experiment(&spec).is_err());
    }
}
