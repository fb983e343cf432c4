//! Discrete-time model-reference adaptive control of the wing-rock roll
//! dynamics, with a [`LackiState`] as the adaptive element.
//!
//! Plant (Euler-discretised with step `delta`):
//!
//! ```text
//! x1' = x2
//! x2' = a(x) + b u
//! ```
//!
//! The controller inverts the known input gain `b` and treats the whole drift
//! `a` as model error: `u = (nu_r + nu_pd - nu_ad) / b` with
//! `nu_pd = K1 e1 + K2 e2`, `e = xi - x` and `nu_r` the reference model's
//! acceleration. The learner is trained online on `(x_n, a(x_n) + noise)`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LackiError, Result};
use crate::ext_real;
use crate::lacki::{KiConfig, LackiState};

/// Drift coefficients `W0..W5` of the nominal wing-rock problem.
pub const NOMINAL_W: [f64; 6] = [0.8, 0.2314, 0.6918, -0.6245, 0.0095, 0.0214];

/// Known control-input gain of the nominal problem.
pub const NOMINAL_B: f64 = 3.0;

/// Divergence threshold on `|x|_inf`.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Floor applied to cumulative metrics before taking the logarithm.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WingRockPlant {
    pub w: [f64; 6],
    pub b: f64,
}

impl Default for WingRockPlant {
    fn default() -> Self {
        Self { w: NOMINAL_W, b: NOMINAL_B }
    }
}

impl WingRockPlant {
    /// Plant with all drift coefficients multiplied by `s`.
    pub fn scaled(s: f64) -> Self {
        Self {
            w: NOMINAL_W.map(|w| w * s),
            b: NOMINAL_B,
        }
    }

    /// `a(x) = W0 + W1 x1 + W2 x2 + W3 |x1| x2 + W4 |x2| x2 + W5 x2^3`.
    pub fn drift(&self, x: [f64; 2]) -> f64 {
        let [x1, x2] = x;
        let w = &self.w;
        w[0] + w[1] * x1 + w[2] * x2 + w[3] * x1.abs() * x2 + w[4] * x2.abs() * x2 + w[5] * x2 * x2 * x2
    }
}

/// Reference command `r(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    /// `+amplitude` for the first half of each period, `-amplitude` after.
    Square { amplitude: f64, period: f64 },
    Sine { amplitude: f64, period: f64 },
    Constant { value: f64 },
}

impl Default for Command {
    fn default() -> Self {
        Command::Square {
            amplitude: 1.0,
            period: 20.0,
        }
    }
}

impl Command {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Command::Square { amplitude, period } => {
                if t.rem_euclid(period) < 0.5 * period {
                    amplitude
                } else {
                    -amplitude
                }
            }
            Command::Sine { amplitude, period } => amplitude * (std::f64::consts::TAU * t / period).sin(),
            Command::Constant { value } => value,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Command::Square { amplitude, period } | Command::Sine { amplitude, period } => {
                amplitude.is_finite() && period.is_finite() && period > 0.0
            }
            Command::Constant { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(LackiError::InvalidConfig(format!("invalid reference command {self:?}")))
        }
    }
}

/// Second-order reference model `xi1' = xi2`, `xi2' = wn^2 (r - xi1) - 2 zeta wn xi2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceModel {
    pub omega_n: f64,
    pub zeta: f64,
    pub command: Command,
}

impl Default for ReferenceModel {
    fn default() -> Self {
        Self {
            omega_n: 1.0,
            zeta: 0.5,
            command: Command::default(),
        }
    }
}

impl ReferenceModel {
    /// Reference acceleration `f_r(xi, r)`.
    pub fn accel(&self, xi: [f64; 2], r: f64) -> f64 {
        self.omega_n * self.omega_n * (r - xi[0]) - 2.0 * self.zeta * self.omega_n * xi[1]
    }
}

/// One simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MracConfig {
    pub k1: f64,
    pub k2: f64,
    pub delta: f64,
    pub t0: f64,
    pub tf: f64,
    pub x0: [f64; 2],
    /// Initial reference state.
    pub xi0: [f64; 2],
    pub w_scale: f64,
    /// Half-width of the uniform noise on drift observations.
    pub obs_noise: f64,
    pub learner: KiConfig,
    pub reference: ReferenceModel,
    /// `false` forces `nu_ad = 0` and skips learning (PD + feedforward baseline).
    pub adaptive: bool,
    pub record_trajectory: bool,
    pub seed: u64,
}

impl Default for MracConfig {
    fn default() -> Self {
        Self::nominal()
    }
}

impl MracConfig {
    /// The nominal wing-rock setup: `x0 = (3, 6)`, `delta = 0.005`, 50 s,
    /// `K1 = K2 = 1`, learner with `L_floor = alpha = 1`, `lambda = 0`.
    pub fn nominal() -> Self {
        Self {
            k1: 1.0,
            k2: 1.0,
            delta: 0.005,
            t0: 0.0,
            tf: 50.0,
            x0: [3.0, 6.0],
            xi0: [0.0, 0.0],
            w_scale: 1.0,
            obs_noise: 0.0,
            learner: KiConfig::default().with_l_floor(1.0),
            reference: ReferenceModel::default(),
            adaptive: true,
            record_trajectory: false,
            seed: 0,
        }
    }

    pub fn plant(&self) -> WingRockPlant {
        WingRockPlant::scaled(self.w_scale)
    }

    /// Number of Euler steps; the run visits `n_steps() + 1` states.
    pub fn n_steps(&self) -> usize {
        ((self.tf - self.t0) / self.delta).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LackiError::InvalidConfig(msg));
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta must be > 0, got {}", self.delta));
        }
        if !(self.t0.is_finite() && self.tf.is_finite() && self.tf > self.t0) {
            return bad(format!("need tf > t0, got t0 = {}, tf = {}", self.t0, self.tf));
        }
        if !(self.obs_noise.is_finite() && self.obs_noise >= 0.0) {
            return bad(format!("obs_noise must be >= 0, got {}", self.obs_noise));
        }
        let finite = [self.k1, self.k2, self.w_scale, self.reference.omega_n, self.reference.zeta]
            .iter()
            .chain(&self.x0)
            .chain(&self.xi0)
            .all(|v| v.is_finite());
        if !finite {
            return bad("gains, states, w_scale and reference parameters must be finite".into());
        }
        self.reference.command.validate()?;
        self.learner.validate_for(2, 1)
    }
}

/// Control law; returns `(u, nu_ad)`.
///
/// `nu_ad` is zero when the learner holds no data or `adaptive` is off.
#[allow(clippy::too_many_arguments)]
pub fn control(
    learner: &LackiState,
    adaptive: bool,
    x: [f64; 2],
    xi: [f64; 2],
    nu_r: f64,
    k1: f64,
    k2: f64,
    b: f64,
) -> Result<(f64, f64)> {
    let nu_ad = if adaptive && !learner.is_empty() {
        learner.predict_scalar(&x)?
    } else {
        0.0
    };
    let nu_pd = k1 * (xi[0] - x[0]) + k2 * (xi[1] - x[1]);
    Ok(((nu_r + nu_pd - nu_ad) / b, nu_ad))
}

/// One recorded time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub e1: f64,
    pub e2: f64,
    pub u: f64,
    pub nu_ad: f64,
    pub a_true: f64,
    pub ell: f64,
}

impl TrajectoryRow {
    pub const HEADER: [&'static str; 11] = ["t", "x1", "x2", "xi1", "xi2", "e1", "e2", "u", "nu_ad", "a_true", "ell"];

    pub fn error_norm(&self) -> f64 {
        self.e1.abs().max(self.e2.abs())
    }

    pub fn prediction_error(&self) -> f64 {
        (self.nu_ad - self.a_true).abs()
    }
}

/// Metrics of one trial. Cumulative metrics are natural logs of
/// left-endpoint rectangle-rule integrals; a diverged trial reports `+inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    #[serde(with = "ext_real")]
    pub log_xerr: f64,
    #[serde(with = "ext_real")]
    pub log_xdoterr: f64,
    #[serde(with = "ext_real")]
    pub log_prederr: f64,
    #[serde(with = "ext_real")]
    pub log_cmd: f64,
    /// Wall-clock seconds; not reproducible across runs.
    pub max_rt_predict: f64,
    pub max_rt_learn: f64,
    pub ell_final: f64,
    pub diverged: bool,
    /// Number of recorded states (`n_steps + 1` for a complete run).
    pub states: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trajectory: Option<Vec<TrajectoryRow>>,
}

impl TrialRecord {
    /// Copy with the wall-clock fields zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        Self {
            max_rt_predict: 0.0,
            max_rt_learn: 0.0,
            ..self.clone()
        }
    }
}

fn log_metric(integral: f64, diverged: bool) -> f64 {
    if diverged {
        f64::INFINITY
    } else {
        integral.max(LOG_FLOOR).ln()
    }
}

/// Runs one closed-loop simulation from `t0` to `tf`.
///
/// At every state the controller predicts, then the learner ingests the
/// current drift observation, then the plant and reference advance one
/// Euler step. Divergence ends the run early and is reported in the record.
pub fn run_trial(config: &MracConfig) -> Result<TrialRecord> {
    config.validate()?;
    let plant = config.plant();
    let steps = config.n_steps();
    let delta = config.delta;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut learner = LackiState::empty(2, 1, config.learner.clone())?;

    let (mut x, mut xi) = (config.x0, config.xi0);
    let mut integrals = [0.0_f64; 4];
    let (mut rt_predict, mut rt_learn) = (0.0_f64, 0.0_f64);
    let mut trajectory = config.record_trajectory.then(|| Vec::with_capacity(steps + 1));
    let mut diverged = false;
    let mut states = 0;

    for n in 0..=steps {
        let t = config.t0 + n as f64 * delta;
        let nu_r = config.reference.accel(xi, config.reference.command.at(t));
        let clock = Instant::now();
        let (u, nu_ad) = control(&learner, config.adaptive, x, xi, nu_r, config.k1, config.k2, plant.b)?;
        rt_predict = rt_predict.max(clock.elapsed().as_secs_f64());
        let a = plant.drift(x);
        let (e1, e2) = (xi[0] - x[0], xi[1] - x[1]);
        states += 1;
        if let Some(rows) = trajectory.as_mut() {
            rows.push(TrajectoryRow {
                t,
                x1: x[0],
                x2: x[1],
                xi1: xi[0],
                xi2: xi[1],
                e1,
                e2,
                u,
                nu_ad,
                a_true: a,
                ell: learner.ell(),
            });
        }

        if config.adaptive {
            let noise = if config.obs_noise > 0.0 {
                rng.gen_range(-config.obs_noise..=config.obs_noise)
            } else {
                0.0
            };
            let clock = Instant::now();
            learner.add_observation(&x, &[a + noise])?;
            rt_learn = rt_learn.max(clock.elapsed().as_secs_f64());
        }

        if n == steps {
            break;
        }
        for (acc, v) in integrals.iter_mut().zip([e1, e2, nu_ad - a, u]) {
            *acc += v.abs() * delta;
        }
        x = [x[0] + delta * x[1], x[1] + delta * (a + plant.b * u)];
        xi = [xi[0] + delta * xi[1], xi[1] + delta * nu_r];
        let finite = x.iter().chain(&xi).all(|v| v.is_finite());
        if !finite || x[0].abs().max(x[1].abs()) > DIVERGENCE_LIMIT {
            diverged = true;
            break;
        }
    }

    Ok(TrialRecord {
        log_xerr: log_metric(integrals[0], diverged),
        log_xdoterr: log_metric(integrals[1], diverged),
        log_prederr: log_metric(integrals[2], diverged),
        log_cmd: log_metric(integrals[3], diverged),
        max_rt_predict: rt_predict,
        max_rt_learn: rt_learn,
        ell_final: learner.ell(),
        diverged,
        states,
        trajectory,
    })
}

/// Ranges sampled uniformly per campaign trial; `None` keeps the base value.
///
/// The default randomises nothing; [`Randomization::nominal`] gives the
/// nominal campaign ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Randomization {
    /// Applied independently to both initial-state components.
    pub x0: Option<[f64; 2]>,
    pub l_floor: Option<[f64; 2]>,
    pub w_scale: Option<[f64; 2]>,
}

impl Default for Randomization {
    fn default() -> Self {
        Self::none()
    }
}

impl Randomization {
    /// `x0 ~ U[0,7]^2`, `L_floor ~ U[0.05, 2]`, `w_scale ~ U[0, 2]`.
    pub fn nominal() -> Self {
        Self {
            x0: Some([0.0, 7.0]),
            l_floor: Some([0.05, 2.0]),
            w_scale: Some([0.0, 2.0]),
        }
    }

    pub fn none() -> Self {
        Self {
            x0: None,
            l_floor: None,
            w_scale: None,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, r) in [("x0", self.x0), ("l_floor", self.l_floor), ("w_scale", self.w_scale)] {
            if let Some([lo, hi]) = r {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(LackiError::InvalidConfig(format!(
                        "randomization range for {name} must satisfy lo <= hi, got [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn draw(rng: &mut ChaCha8Rng, range: [f64; 2]) -> f64 {
    if range[0] == range[1] {
        range[0]
    } else {
        rng.gen_range(range[0]..=range[1])
    }
}

/// Realised configuration of campaign trial `i`.
///
/// Trial `i` gets seed `base.seed + i` and its randomised quantities come
/// from stream `i + 1` of a ChaCha8 generator keyed by `base.seed`, so the
/// draws do not depend on how many trials run or in which order.
pub fn campaign_trial_config(base: &MracConfig, spec: &Randomization, i: usize) -> MracConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(base.seed);
    rng.set_stream(i as u64 + 1);
    let mut c = base.clone();
    c.seed = base.seed.wrapping_add(i as u64);
    if let Some(r) = spec.x0 {
        c.x0 = [draw(&mut rng, r), draw(&mut rng, r)];
    }
    if let Some(r) = spec.l_floor {
        c.learner.l_floor = draw(&mut rng, r);
    }
    if let Some(r) = spec.w_scale {
        c.w_scale = draw(&mut rng, r);
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignTrial {
    pub config: MracConfig,
    pub record: TrialRecord,
}

/// Runs `n_trials` randomised trials in parallel; order of the output
/// matches trial index.
pub fn run_campaign(base: &MracConfig, n_trials: usize, spec: &Randomization) -> Result<Vec<CampaignTrial>> {
    if n_trials == 0 {
        return Err(LackiError::InvalidConfig("n_trials must be >= 1".into()));
    }
    spec.validate()?;
    base.validate()?;
    (0..n_trials)
        .into_par_iter()
        .map(|i| {
            let config = campaign_trial_config(base, spec, i);
            let record = run_trial(&config)?;
            Ok(CampaignTrial { config, record })
        })
        .collect()
}
