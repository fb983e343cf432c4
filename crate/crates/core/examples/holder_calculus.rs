//! Building Hölder descriptors of composite functions from their parts.
//!
//! Run with `cargo run --example holder_calculus`.

use lacki::HolderDescriptor;

fn main() -> Result<(), lacki::HolderError> {
    // on [-1, 1]: s -> exp(-s) is e-Lipschitz, bounded by e, at least 1/e
    let e = std::f64::consts::E;
    let exp_neg = HolderDescriptor::lipschitz(e)?.with_sup_abs(e)?.with_inf_abs(1.0 / e)?;
    let sq = HolderDescriptor::lipschitz(2.0)?.with_sup_abs(1.0)?;

    let h = exp_neg.compose(&sq);
    println!("exp(-x^2)        L = {:.4}, p = {}", h.constant, h.exponent);

    let ident = HolderDescriptor::lipschitz(1.0)?.with_sup_abs(1.0)?;
    let sum = ident.scale(2.0).add(&ident)?;
    println!("3x               L = {:.4}", sum.constant);
    println!("x * 3x           L = {:.4}", ident.multiply(&sum.with_sup_abs(3.0)?)?.constant);

    let recip = exp_neg.reciprocal()?;
    println!("exp(s)           L = {:.4}", recip.constant);

    let root = HolderDescriptor::new(1.0, 0.5)?;
    let r = root.compose(&ident);
    println!("sqrt|x|          L = {:.4}, p = {}", r.constant, r.exponent);

    let weak = ident.weaken(0.5, 2.0)?;
    let env = HolderDescriptor::envelope(&[weak, r])?;
    println!("max(x, sqrt|x|)  L = {:.4}, p = {}", env.constant, env.exponent);
    Ok(())
}
