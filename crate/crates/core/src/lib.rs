//! Nonparametric regression with lazily adapted Hölder constants.
//!
//! The crate is organised around one regression core and the tools built
//! on top of it:
//!
//! - [`lacki`]: the kinky inference predictor and the lazily adapted
//!   constant estimator (batch and incremental).
//! - [`holder`]: Hölder arithmetic for deriving a priori constants.
//! - [`guarantees`]: sample-complexity and tracking-error bound calculators.
//! - [`mrac`]: a discrete-time model-reference adaptive controller for the
//!   wing-rock roll dynamics, with the regression core as adaptive element.
//! - [`bench`]: regression benchmarks against a least-squares baseline.
//! - [`cli`]: the `lacki` command-line front end.
//!
//! Runnable walkthroughs for each part live in `examples/`.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod ext_real;
pub mod guarantees;
pub mod holder;
pub mod lacki;
pub mod metric;
pub mod mrac;

pub use dataset::Dataset;
pub use error::{LackiError, Result};
pub use holder::{HolderDescriptor, HolderError};
pub use lacki::{estimate_constant_batch, KiConfig, LackiState, Prediction};
pub use metric::InputMetric;
