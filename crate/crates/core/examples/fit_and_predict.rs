//! Batch fit on noisy samples of a 1-D function, then query the envelopes.
//!
//! Run with `cargo run --example fit_and_predict`.

use lacki::{Dataset, KiConfig, LackiState};

fn target(x: f64) -> f64 {
    (3.0 * x).sin() + 0.5 * x
}

fn main() -> lacki::Result<()> {
    // deterministic "noise" keeps the output stable
    let pairs: Vec<(f64, f64)> = (0..40)
        .map(|i| {
            let x = i as f64 / 39.0 * 4.0 - 2.0;
            let wobble = 0.05 * ((i * 7919) % 11) as f64 / 10.0 - 0.025;
            (x, target(x) + wobble)
        })
        .collect();
    let data = Dataset::from_scalar_pairs(&pairs)?;

    let config = KiConfig::default().with_lambda(0.05).with_e_bar(0.025);
    let model = LackiState::fit(data, config)?;
    println!("estimated constant {:.4} (true Lipschitz constant 3.5)", model.ell());

    println!("{:>6} {:>9} {:>9} {:>9}", "x", "truth", "value", "halfwidth");
    for q in [-2.5, -1.0, -0.37, 0.0, 0.81, 2.0, 3.0] {
        let p = model.predict(&[q])?;
        println!("{q:>6.2} {:>9.4} {:>9.4} {:>9.4}", target(q), p.value[0], p.halfwidth[0]);
    }
    Ok(())
}
