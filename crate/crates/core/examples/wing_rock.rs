//! Nominal wing-rock tracking run, adaptive vs. PD baseline.
//!
//! Run with `cargo run --release --example wing_rock`.

use lacki::mrac::{run_trial, MracConfig, TrajectoryRow};

fn window_mean(rows: &[TrajectoryRow], f: impl Fn(&TrajectoryRow) -> f64) -> f64 {
    rows.iter().map(f).sum::<f64>() / rows.len() as f64
}

fn main() -> lacki::Result<()> {
    let mut config = MracConfig::nominal();
    config.record_trajectory = true;
    let adaptive = run_trial(&config)?;

    let mut baseline = config.clone();
    baseline.adaptive = false;
    let pd = run_trial(&baseline)?;

    let rows = adaptive.trajectory.as_deref().unwrap_or_default();
    let head = &rows[..rows.len() / 20];
    let tail = &rows[rows.len() - rows.len() / 5..];
    println!("states recorded      {}", adaptive.states);
    println!("final constant       {:.4}", adaptive.ell_final);
    println!(
        "tracking error       head {:.4}  tail {:.4}",
        window_mean(head, TrajectoryRow::error_norm),
        window_mean(tail, TrajectoryRow::error_norm)
    );
    println!(
        "prediction error     head {:.4}  tail {:.4}",
        window_mean(head, TrajectoryRow::prediction_error),
        window_mean(tail, TrajectoryRow::prediction_error)
    );
    println!("log-XERR             adaptive {:.3}  pd {:.3}", adaptive.log_xerr, pd.log_xerr);
    println!("log-XDOTERR          adaptive {:.3}  pd {:.3}", adaptive.log_xdoterr, pd.log_xdoterr);
    println!("log-PREDERR          adaptive {:.3}  pd {:.3}", adaptive.log_prederr, pd.log_prederr);
    println!("log-CMD              adaptive {:.3}  pd {:.3}", adaptive.log_cmd, pd.log_cmd);
    Ok(())
}
