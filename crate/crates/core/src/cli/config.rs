use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::bench::ExperimentSpec;
use crate::guarantees::ErrorSystem;
use crate::lacki::KiConfig;
use crate::mrac::{MracConfig, Randomization};

/// Contents of the `--config` TOML file. Every table is optional and
/// unknown keys anywhere are rejected.
///
/// Seeds: `--seed` beats the top-level `seed`, which beats the per-section
/// seeds of `[experiment]` and `[simulation]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Learner used by `fit`.
    pub learner: Option<KiConfig>,
    pub experiment: Option<ExperimentSpec>,
    pub sweep: Option<SweepConfig>,
    pub simulation: Option<MracConfig>,
    pub campaign: Option<CampaignConfig>,
    pub bounds: Option<BoundsConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }
}

/// Repeats `[experiment]` over a grid of training sizes or input dimensions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub n_train: Vec<usize>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub n_trials: usize,
    pub randomization: Randomization,
    /// Also run the `nu_ad = 0` baseline on the same trials.
    pub baseline: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            n_trials: 50,
            randomization: Randomization::nominal(),
            baseline: true,
        }
    }
}

/// A gain given as a scalar multiple of the identity or as a full matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gain {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

impl Gain {
    fn to_matrix(&self, m: usize) -> Result<DMatrix<f64>, CliError> {
        match self {
            Gain::Scalar(k) => Ok(DMatrix::identity(m, m) * *k),
            Gain::Matrix(rows) => {
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    return Err(CliError::Usage(format!("gain matrix must be {m}x{m}")));
                }
                Ok(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub m: usize,
    pub delta: f64,
    pub k1: Gain,
    pub k2: Gain,
    pub innovation_bound: f64,
    pub e0_norm: f64,
    pub horizon: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            m: 1,
            delta: 0.005,
            k1: Gain::Scalar(1.0),
            k2: Gain::Scalar(1.0),
            innovation_bound: 1.0,
            e0_norm: 0.0,
            horizon: 5000,
        }
    }
}

impl BoundsConfig {
    pub fn system(&self) -> Result<ErrorSystem, CliError> {
        let k1 = self.k1.to_matrix(self.m)?;
        let k2 = self.k2.to_matrix(self.m)?;
        Ok(ErrorSystem::assemble(self.m, self.delta, k1, k2, self.innovation_bound)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_all_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected_at_every_level() {
        assert!(RunConfig::parse("sed = 1").is_err());
        assert!(RunConfig::parse("[learner]\nlamda = 1.0").is_err());
        assert!(RunConfig::parse("[simulation]\nk3 = 1.0").is_err());
        assert!(RunConfig::parse("[experiment]\ntarget = { kind = \"f3\" }").is_err());
        assert!(RunConfig::parse("[bounds]\nrho = 1.0").is_err());
    }

    #[test]
    fn sections_parse() {
        let c = RunConfig::parse(
            r#"
seed = 7
[learner]
lambda = 0.5
metric = { kind = "euclidean_norm" }
[experiment]
target = { kind = "f2" }
n_train = 33
[simulation]
tf = 1.0
reference = { omega_n = 2.0, command = { kind = "sine", amplitude = 1.0, period = 5.0 } }
[campaign]
n_trials = 3
randomization = { x0 = [0.0, 1.0] }
[bounds]
k1 = [[1.0, 0.0], [0.0, 2.0]]
m = 2
"#,
        )
        .unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.learner.unwrap().lambda, 0.5);
        assert_eq!(c.experiment.unwrap().n_train, 33);
        assert_eq!(c.simulation.unwrap().reference.omega_n, 2.0);
        let camp = c.campaign.unwrap();
        assert_eq!(camp.randomization.l_floor, None);
        assert_eq!(c.bounds.unwrap().system().unwrap().dim(), 4);
    }
}
