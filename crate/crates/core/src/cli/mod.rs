//! The `lacki` command-line front end.
//!
//! Subcommands: `fit`, `predict`, `bench`, `simulate`, `campaign`,
//! `bounds` and `complexity`. Configuration comes from an optional TOML file
//! (see [`RunConfig`]); outputs go to `--out` (default `.`) with names of
//! the form `<subcommand>_s<seed>...`, so reruns with the same seed
//! overwrite identical files. Wall-clock measurements are written to
//! separate `*_timings.*` files to keep the main outputs reproducible.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 I/O error,
//! 4 numeric failure (divergence, undefined prediction, unstable system).

mod config;
pub mod io;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub use config::{BoundsConfig, CampaignConfig, Gain, RunConfig, SweepConfig};

use crate::bench::{self, ExperimentResult, ExperimentSpec};
use crate::error::LackiError;
use crate::guarantees::{self, GuaranteeError};
use crate::lacki::LackiState;
use crate::mrac::{self, CampaignTrial, MracConfig, TrajectoryRow, TrialRecord};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<LackiError> for CliError {
    fn from(e: LackiError) -> Self {
        match e {
            LackiError::PredictionUndefined(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GuaranteeError> for CliError {
    fn from(e: GuaranteeError) -> Self {
        match e {
            GuaranteeError::InvalidArgument(_) | GuaranteeError::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lacki", version, about = "Lazily adapted constant kinky inference")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Global seed; overrides every seed in the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel repeats and trials.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a CSV dataset (header x_1..x_d,y_1..y_m).
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model_out: PathBuf,
    },
    /// Predict at the query inputs of a CSV file (header x_1..x_d).
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Regression benchmark from [experiment] and optional [sweep].
    Bench,
    /// Single closed-loop run from [simulation].
    Simulate,
    /// Randomised trials from [simulation] and [campaign].
    Campaign,
    /// Tracking-error bounds from [bounds].
    Bounds,
    /// Sample-complexity bound for uniform samples on [0,1]^d.
    Complexity {
        #[arg(allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(allow_negative_numbers = true)]
        delta: f64,
        #[arg(allow_negative_numbers = true)]
        l_star: f64,
        d: usize,
    },
}

/// Parses `std::env::args`, runs, reports errors on stderr, returns the exit code.
pub fn main_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Resolved global settings shared by all subcommands.
struct Context {
    config: RunConfig,
    seed: Option<u64>,
    out: PathBuf,
}

impl Context {
    fn new(global: &GlobalArgs) -> Result<Self, CliError> {
        let config = match &global.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let seed = global.seed.or(config.seed);
        let out = global
            .out
            .clone()
            .or_else(|| config.out.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(Self { config, seed, out })
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::io(&self.out, e))?;
        Ok(&self.out)
    }

    fn path(&self, name: String) -> Result<PathBuf, CliError> {
        Ok(self.out_dir()?.join(name))
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        // fails only if a pool already exists, e.g. when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Command::Complexity {
        epsilon,
        delta,
        l_star,
        d,
    } = cli.command
    {
        return cmd_complexity(epsilon, delta, l_star, d);
    }
    let ctx = Context::new(&cli.global)?;
    match &cli.command {
        Command::Fit { data, model_out } => cmd_fit(&ctx, data, model_out),
        Command::Predict { model, queries, output } => cmd_predict(model, queries, output),
        Command::Bench => cmd_bench(&ctx),
        Command::Simulate => cmd_simulate(&ctx),
        Command::Campaign => cmd_campaign(&ctx),
        Command::Bounds => cmd_bounds(&ctx),
        Command::Complexity { .. } => unreachable!(),
    }
}

fn fmt(v: f64) -> String {
    v.to_string()
}

fn cmd_fit(ctx: &Context, data: &Path, model_out: &Path) -> Result<(), CliError> {
    let data = io::read_dataset(data)?;
    let (n, d, m) = (data.len(), data.input_dim(), data.output_dim());
    let state = LackiState::fit(data, ctx.config.learner.clone().unwrap_or_default())?;
    io::write_model(model_out, &state)?;
    println!("ell = {}", state.ell());
    println!("samples = {n}, input dim = {d}, output dim = {m}");
    Ok(())
}

fn cmd_predict(model: &Path, queries: &Path, output: &Path) -> Result<(), CliError> {
    let state = io::read_model(model)?;
    let (d, rows) = io::read_queries(queries)?;
    let (dm, m) = (state.data().input_dim(), state.data().output_dim());
    if d != dm {
        return Err(CliError::Usage(format!("queries have {d} input columns, model expects {dm}")));
    }
    let mut header: Vec<String> = (1..=d).map(|i| format!("x_{i}")).collect();
    header.extend((1..=m).map(|j| format!("value_{j}")));
    header.extend((1..=m).map(|j| format!("halfwidth_{j}")));
    let mut out = Vec::with_capacity(rows.len());
    for q in &rows {
        let p = state.predict(q)?;
        let row: Vec<String> = q.iter().chain(&p.value).chain(&p.halfwidth).map(|v| fmt(*v)).collect();
        out.push(row);
    }
    io::write_csv(output, &header, out)?;
    println!("predicted {} queries", rows.len());
    Ok(())
}

fn cmd_complexity(epsilon: f64, delta: f64, l_star: f64, d: usize) -> Result<(), CliError> {
    let sc = guarantees::sample_complexity(epsilon, delta, l_star, d)?;
    println!("k={} N={}", sc.k, sc.n);
    Ok(())
}

fn metric_of(name: &str) -> fn(&bench::MetricBundle) -> bench::Summary {
    match name {
        "rms" => |b| b.rms,
        "me" => |b| b.me,
        "log_tt" => |b| b.log_tt,
        _ => |b| b.log_pt,
    }
}

#[derive(Serialize)]
struct BenchPoint<'a> {
    n_train: usize,
    d: usize,
    result: &'a ExperimentResult,
}

fn cmd_bench(ctx: &Context) -> Result<(), CliError> {
    let mut base = ctx.config.experiment.clone().unwrap_or_default();
    if let Some(s) = ctx.seed {
        base.seed = s;
    }
    let sweep = ctx.config.sweep.clone().unwrap_or_default();
    if !sweep.n_train.is_empty() && !sweep.dims.is_empty() {
        return Err(CliError::Usage("[sweep] takes either n_train or dims, not both".into()));
    }
    let specs: Vec<ExperimentSpec> = if !sweep.dims.is_empty() {
        sweep.dims.iter().map(|&d| ExperimentSpec { d, ..base.clone() }).collect()
    } else if !sweep.n_train.is_empty() {
        sweep.n_train.iter().map(|&n| ExperimentSpec { n_train: n, ..base.clone() }).collect()
    } else {
        vec![base.clone()]
    };
    let by_dim = !sweep.dims.is_empty();
    let results = specs
        .iter()
        .map(bench::run_experiment)
        .collect::<Result<Vec<_>, _>>()?;

    let stem = format!("bench_s{}", base.seed);
    let mut rows = Vec::new();
    let mut timing_rows = Vec::new();
    for (spec, res) in specs.iter().zip(&results) {
        for r in &res.repeats {
            let key = vec![spec.n_train.to_string(), spec.d.to_string(), r.repeat.to_string(), r.learner.clone()];
            let mut row = key.clone();
            row.extend([fmt(r.rms), fmt(r.me), r.ell.map(fmt).unwrap_or_default()]);
            rows.push(row);
            let mut trow = key;
            trow.extend([fmt(r.log_tt), fmt(r.log_pt)]);
            timing_rows.push(trow);
        }
    }
    let head = |extra: &[&str]| -> Vec<String> {
        ["n_train", "d", "repeat", "learner"]
            .iter()
            .chain(extra)
            .map(|s| s.to_string())
            .collect()
    };
    io::write_csv(&ctx.path(format!("{stem}.csv"))?, &head(&["rms", "me", "ell"]), rows)?;
    io::write_csv(&ctx.path(format!("{stem}_timings.csv"))?, &head(&["log_tt", "log_pt"]), timing_rows)?;

    let stripped: Vec<ExperimentResult> = results.iter().map(|r| r.without_timings()).collect();
    let summary: Vec<BenchPoint> = specs
        .iter()
        .zip(&stripped)
        .map(|(s, r)| BenchPoint {
            n_train: s.n_train,
            d: s.d,
            result: r,
        })
        .collect();
    io::write_json(&ctx.path(format!("{stem}.json"))?, &summary)?;

    let learners: Vec<String> = results[0].bundles.iter().map(|b| b.learner.clone()).collect();
    for metric in ["rms", "me", "log_tt", "log_pt"] {
        let get = metric_of(metric);
        for learner in &learners {
            let points = specs.iter().zip(&results).filter_map(|(s, r)| {
                let x = if by_dim { s.d } else { s.n_train } as f64;
                r.bundle(learner).map(|b| (x, get(b).mean))
            });
            let timing = if metric.starts_with("log_") { "_timings" } else { "" };
            io::write_dat(&ctx.path(format!("{stem}_{metric}_{learner}{timing}.dat"))?, points)?;
        }
    }

    for (spec, res) in specs.iter().zip(&results) {
        for b in &res.bundles {
            println!(
                "n={} d={} {:<7} rms {:.4} +- {:.4}  me {:.4} +- {:.4}",
                spec.n_train, spec.d, b.learner, b.rms.mean, b.rms.std, b.me.mean, b.me.std
            );
        }
    }
    Ok(())
}

fn simulation_config(ctx: &Context) -> MracConfig {
    let mut c = ctx.config.simulation.clone().unwrap_or_default();
    if let Some(s) = ctx.seed {
        c.seed = s;
    }
    c
}

#[derive(Serialize)]
struct Timings {
    max_rt_predict: f64,
    max_rt_learn: f64,
}

impl From<&TrialRecord> for Timings {
    fn from(r: &TrialRecord) -> Self {
        Self {
            max_rt_predict: r.max_rt_predict,
            max_rt_learn: r.max_rt_learn,
        }
    }
}

fn trajectory_rows(rows: &[TrajectoryRow]) -> impl Iterator<Item = Vec<String>> + '_ {
    rows.iter().map(|r| {
        [r.t, r.x1, r.x2, r.xi1, r.xi2, r.e1, r.e2, r.u, r.nu_ad, r.a_true, r.ell]
            .iter()
            .map(|v| fmt(*v))
            .collect()
    })
}

type Column = fn(&TrajectoryRow) -> f64;

fn cmd_simulate(ctx: &Context) -> Result<(), CliError> {
    let mut config = simulation_config(ctx);
    config.record_trajectory = true;
    let mut record = mrac::run_trial(&config)?;
    let rows = record.trajectory.take().unwrap_or_default();
    let stem = format!("simulate_s{}", config.seed);

    let header: Vec<String> = TrajectoryRow::HEADER.iter().map(|s| s.to_string()).collect();
    io::write_csv(&ctx.path(format!("{stem}_trajectory.csv"))?, &header, trajectory_rows(&rows))?;
    io::write_json(&ctx.path(format!("{stem}.json"))?, &record.without_timings())?;
    io::write_json(&ctx.path(format!("{stem}_timings.json"))?, &Timings::from(&record))?;
    let series: [(&str, Column); 5] = [
        ("error", TrajectoryRow::error_norm),
        ("prediction_error", TrajectoryRow::prediction_error),
        ("ell", |r| r.ell),
        ("x1", |r| r.x1),
        ("xi1", |r| r.xi1),
    ];
    for (name, f) in series {
        io::write_dat(&ctx.path(format!("{stem}_{name}.dat"))?, rows.iter().map(|r| (r.t, f(r))))?;
    }

    println!("states = {}", record.states);
    println!("ell_final = {}", record.ell_final);
    println!(
        "log_xerr = {}  log_xdoterr = {}  log_prederr = {}  log_cmd = {}",
        record.log_xerr, record.log_xdoterr, record.log_prederr, record.log_cmd
    );
    if record.diverged {
        return Err(CliError::Numeric(format!("trial diverged after {} states", record.states)));
    }
    Ok(())
}

const CAMPAIGN_METRICS: [&str; 4] = ["log_xerr", "log_xdoterr", "log_prederr", "log_cmd"];

fn campaign_metric(r: &TrialRecord, name: &str) -> f64 {
    match name {
        "log_xerr" => r.log_xerr,
        "log_xdoterr" => r.log_xdoterr,
        "log_prederr" => r.log_prederr,
        _ => r.log_cmd,
    }
}

/// Min, lower quartile, median, upper quartile and max (linear interpolation).
pub fn quantiles(values: &[f64]) -> [f64; 5] {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    };
    [q(0.0), q(0.25), q(0.5), q(0.75), q(1.0)]
}

#[derive(Serialize)]
struct CampaignSummary {
    controller: String,
    trials: usize,
    diverged: usize,
    /// Quantiles (min, q1, median, q3, max) per metric.
    quantiles: std::collections::BTreeMap<String, [f64; 5]>,
}

fn cmd_campaign(ctx: &Context) -> Result<(), CliError> {
    let base = simulation_config(ctx);
    let cc = ctx.config.campaign.clone().unwrap_or_default();
    let mut runs: Vec<(&str, Vec<CampaignTrial>)> =
        vec![("lacki", mrac::run_campaign(&base, cc.n_trials, &cc.randomization)?)];
    if cc.baseline {
        let pd = MracConfig {
            adaptive: false,
            ..base.clone()
        };
        runs.push(("pd", mrac::run_campaign(&pd, cc.n_trials, &cc.randomization)?));
    }
    let stem = format!("campaign_s{}", base.seed);

    let mut header: Vec<String> = ["trial", "controller", "x0_1", "x0_2", "l_floor", "w_scale", "diverged"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(CAMPAIGN_METRICS.iter().map(|s| s.to_string()));
    header.push("ell_final".into());
    let mut rows = Vec::new();
    let mut timing_rows = Vec::new();
    for (name, trials) in &runs {
        for (i, t) in trials.iter().enumerate() {
            let c = &t.config;
            let mut row = vec![
                i.to_string(),
                name.to_string(),
                fmt(c.x0[0]),
                fmt(c.x0[1]),
                fmt(c.learner.l_floor),
                fmt(c.w_scale),
                t.record.diverged.to_string(),
            ];
            row.extend(CAMPAIGN_METRICS.iter().map(|m| fmt(campaign_metric(&t.record, m))));
            row.push(fmt(t.record.ell_final));
            rows.push(row);
            timing_rows.push(vec![
                i.to_string(),
                name.to_string(),
                fmt(t.record.max_rt_predict),
                fmt(t.record.max_rt_learn),
            ]);
        }
    }
    io::write_csv(&ctx.path(format!("{stem}.csv"))?, &header, rows)?;
    let theader: Vec<String> = ["trial", "controller", "max_rt_predict", "max_rt_learn"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    io::write_csv(&ctx.path(format!("{stem}_timings.csv"))?, &theader, timing_rows)?;

    let mut summaries = Vec::new();
    for metric in CAMPAIGN_METRICS {
        let mut points = Vec::new();
        for (idx, (_, trials)) in runs.iter().enumerate() {
            let values: Vec<f64> = trials.iter().map(|t| campaign_metric(&t.record, metric)).collect();
            points.extend(quantiles(&values).map(|q| ((idx + 1) as f64, q)));
        }
        io::write_dat(&ctx.path(format!("{stem}_{metric}.dat"))?, points)?;
    }
    for (name, trials) in &runs {
        let quantiles = CAMPAIGN_METRICS
            .iter()
            .map(|m| {
                let values: Vec<f64> = trials.iter().map(|t| campaign_metric(&t.record, m)).collect();
                (m.to_string(), quantiles(&values))
            })
            .collect();
        let s = CampaignSummary {
            controller: name.to_string(),
            trials: trials.len(),
            diverged: trials.iter().filter(|t| t.record.diverged).count(),
            quantiles,
        };
        println!(
            "{:<6} trials {}  diverged {}  median log_xerr {:.4}",
            s.controller, s.trials, s.diverged, s.quantiles["log_xerr"][2]
        );
        summaries.push(s);
    }
    io::write_json(&ctx.path(format!("{stem}.json"))?, &summaries)?;
    Ok(())
}

fn cmd_bounds(ctx: &Context) -> Result<(), CliError> {
    let bc = ctx.config.bounds.clone().unwrap_or_default();
    if !(bc.e0_norm.is_finite() && bc.e0_norm >= 0.0) {
        return Err(CliError::Usage(format!("e0_norm must be >= 0, got {}", bc.e0_norm)));
    }
    let sys = bc.system()?;
    let report = guarantees::bound_report(&sys, bc.e0_norm, bc.horizon);
    let stem = format!("bounds_s{}", ctx.seed.unwrap_or(0));
    io::write_json(&ctx.path(format!("{stem}.json"))?, &BoundsFile { config: &bc, report: &report })?;
    let index = |v: &[f64]| -> Vec<(f64, f64)> { v.iter().enumerate().map(|(n, b)| (n as f64, *b)).collect() };
    io::write_dat(&ctx.path(format!("{stem}_variant1.dat"))?, index(&report.variant1))?;
    if let Some(v2) = &report.variant2 {
        io::write_dat(&ctx.path(format!("{stem}_variant2.dat"))?, index(&v2.bounds))?;
    }
    if let Some(v3) = &report.variant3 {
        io::write_dat(&ctx.path(format!("{stem}_variant3.dat"))?, index(v3))?;
    }
    println!("spectral_radius = {}", report.spectral_radius);
    println!("matrix_norm = {}", report.transition_norm);
    if let Some(a) = report.variant1_asymptote {
        println!("variant1_asymptote = {a}");
    }
    if let Some(v2) = &report.variant2 {
        println!(
            "variant2: k0 = {} phi = {} c = {} ({:?}) asymptote = {}",
            v2.params.k0, v2.params.phi, v2.params.c, v2.params.c_choice, v2.asymptote
        );
    }
    Ok(())
}

/// JSON payload of `bounds`.
#[derive(Serialize)]
struct BoundsFile<'a> {
    config: &'a BoundsConfig,
    #[serde(flatten)]
    report: &'a guarantees::BoundReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        assert_eq!(quantiles(&[3.0, 1.0, 2.0, 4.0, 5.0]), [1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(quantiles(&[1.0, 2.0])[2], 1.5);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(LackiError::InvalidConfig("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(LackiError::PredictionUndefined("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(GuaranteeError::Unstable(1.2)).exit_code(), 4);
        assert_eq!(CliError::Io("x".into()).exit_code(), 3);
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["lacki", "--seed", "3", "complexity", "0.5", "0.1", "1", "1"]).unwrap();
        assert_eq!(cli.global.seed, Some(3));
        assert!(matches!(cli.command, Command::Complexity { d: 1, .. }));
        let cli = Cli::try_parse_from(["lacki", "bench", "--out", "o", "--threads", "2"]).unwrap();
        assert_eq!(cli.global.threads, Some(2));
        assert!(Cli::try_parse_from(["lacki", "fit"]).is_err());
    }
}
