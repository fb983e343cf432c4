//! How many uniform samples guarantee a target worst-case error.
//!
//! Run with `cargo run --example sample_complexity`.

use lacki::guarantees::sample_complexity;

fn main() -> Result<(), lacki::guarantees::GuaranteeError> {
    println!("{:>6} {:>6} {:>4} {:>3} {:>3} {:>10}", "eps", "delta", "L*", "d", "k", "N");
    for (eps, delta, l, d) in [
        (0.5, 0.1, 1.0, 1),
        (1.0, 0.5, 1.0, 1),
        (0.5, 0.1, 1.0, 2),
        (0.1, 0.05, 1.0, 1),
        (0.1, 0.05, 1.0, 3),
        (3.0, 0.1, 1.0, 4),
    ] {
        let sc = sample_complexity(eps, delta, l, d)?;
        println!("{eps:>6} {delta:>6} {l:>4} {d:>3} {:>3} {:>10}", sc.k, sc.n);
    }
    Ok(())
}
