//! Worst-case tracking-error bounds for the wing-rock error dynamics.
//!
//! Run with `cargo run --release --example tracking_bounds`.

use lacki::guarantees::{bound_report, simulate_recurrence, ErrorSystem};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sys = ErrorSystem::scalar(0.005, 1.0, 1.0, 1.0)?;
    let report = bound_report(&sys, 1.0, 5000);
    println!("spectral radius {:.10}", report.spectral_radius);
    println!("|||M|||         {:.5}", report.transition_norm);
    if let Some(a) = report.variant1_asymptote {
        println!("variant 1 asymptote {a:.4}");
    }
    if let Some(v2) = &report.variant2 {
        let p = &v2.params;
        println!("variant 2 k0 {} phi {:.5} c {:.5} ({:?}) asymptote {:.1}", p.k0, p.phi, p.c, p.c_choice, v2.asymptote);
    }

    // a sign-alternating innovation sequence of full size
    let innovations: Vec<DVector<f64>> = (0..5000)
        .map(|i| DVector::from_vec(vec![0.0, if (i / 300) % 2 == 0 { 1.0 } else { -1.0 }]))
        .collect();
    let trace = simulate_recurrence(&sys, &DVector::from_vec(vec![1.0, 0.0]), &innovations)?;
    println!("{:>5} {:>9} {:>9} {:>9}", "n", "|e_n|", "variant1", "variant2");
    for n in [0, 100, 500, 1000, 2500, 5000] {
        let v2 = report.variant2.as_ref().map_or(f64::NAN, |v| v.bounds[n]);
        println!("{n:>5} {:>9.4} {:>9.4} {:>9.2}", trace[n].amax(), report.variant1[n], v2);
    }
    Ok(())
}
