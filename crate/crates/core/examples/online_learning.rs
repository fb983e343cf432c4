//! Streaming updates: the constant only grows and matches a batch refit.
//!
//! Run with `cargo run --example online_learning`.

use lacki::{estimate_constant_batch, KiConfig, LackiState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lacki::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let config = KiConfig::default().with_lambda(0.1).with_l_floor(0.5);
    let mut model = LackiState::empty(2, 1, config.clone())?;

    for step in 1..=400 {
        let x: [f64; 2] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let y = x[0].abs() - 2.0 * x[1] + rng.gen_range(-0.05..0.05);
        let before = model.ell();
        model.add_observation(&x, &[y])?;
        if model.ell() > before || step % 100 == 0 {
            let err = (model.predict_scalar(&[0.3, -0.2])? - 0.7).abs();
            println!("n={step:>3}  ell {:.4}  error at (0.3,-0.2) {err:.4}", model.ell());
        }
    }

    let batch = estimate_constant_batch(model.data(), &config)?;
    println!("incremental {:.12}  batch {:.12}", model.ell(), batch);
    Ok(())
}
