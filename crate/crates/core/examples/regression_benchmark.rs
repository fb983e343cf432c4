//! Regression benchmark on the kinked 1-D target, three learners.
//!
//! Run with `cargo run --release --example regression_benchmark`.

use lacki::bench::{run_experiment, ExperimentSpec};

fn main() -> lacki::Result<()> {
    let spec = ExperimentSpec {
        d: 1,
        n_train: 257,
        n_test: 5000,
        n_repeats: 10,
        ..ExperimentSpec::default()
    };
    let result = run_experiment(&spec)?;
    println!("noise halfwidth {}  lambda {}", spec.noise_halfwidth, spec.learner.lambda);
    println!("{:<8} {:>16} {:>16} {:>8}", "learner", "rms", "max error", "log tt");
    for b in &result.bundles {
        println!(
            "{:<8} {:>8.4} ± {:<6.4} {:>8.4} ± {:<6.4} {:>8.2}",
            b.learner, b.rms.mean, b.rms.std, b.me.mean, b.me.std, b.log_tt.mean
        );
    }
    Ok(())
}
