//! A small randomised campaign: adaptive controller vs. PD baseline.
//!
//! Run with `cargo run --release --example mrac_campaign`.

use lacki::mrac::{run_campaign, MracConfig, Randomization};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn main() -> lacki::Result<()> {
    let base = MracConfig {
        tf: 20.0,
        seed: 42,
        ..MracConfig::nominal()
    };
    let spec = Randomization::nominal();
    let adaptive = run_campaign(&base, 12, &spec)?;
    let pd = run_campaign(&MracConfig { adaptive: false, ..base }, 12, &spec)?;

    println!("{:>5} {:>6} {:>6} {:>6} {:>10} {:>10}", "trial", "x0_1", "x0_2", "scale", "lacki", "pd");
    for (i, (a, p)) in adaptive.iter().zip(&pd).enumerate() {
        let c = &a.config;
        println!(
            "{i:>5} {:>6.2} {:>6.2} {:>6.2} {:>10.4} {:>10.4}",
            c.x0[0], c.x0[1], c.w_scale, a.record.log_xerr, p.record.log_xerr
        );
    }
    let med = |runs: &[lacki::mrac::CampaignTrial]| median(runs.iter().map(|t| t.record.log_xerr).collect());
    println!("median log-XERR  lacki {:.4}  pd {:.4}", med(&adaptive), med(&pd));
    Ok(())
}
