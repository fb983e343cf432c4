//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test --test acceptance` (add `--release` for speed).

use std::time::{Duration, Instant};

use lacki::bench::{run_experiment, ExperimentSpec, Target};
use lacki::guarantees::{
    bound_report, closed_form_state, sample_complexity, simulate_recurrence, ErrorSystem, SampleComplexity,
};
use lacki::mrac::{run_campaign, run_trial, MracConfig, Randomization};
use lacki::{estimate_constant_batch, Dataset, HolderDescriptor, InputMetric, KiConfig, LackiState};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Random smooth scalar target `a sin(b x1 + c) + s x_d`.
struct Wave {
    a: f64,
    b: f64,
    c: f64,
    s: f64,
}

impl Wave {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        Self {
            a: rng.gen_range(-2.0..2.0),
            b: rng.gen_range(0.5..8.0),
            c: rng.gen_range(0.0..6.0),
            s: rng.gen_range(-1.0..1.0),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.a * (self.b * x[0] + self.c).sin() + self.s * x[x.len() - 1]
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect()
}

fn noisy_dataset(rng: &mut ChaCha8Rng, f: &Wave, xs: &[Vec<f64>], e_bar: f64) -> Dataset {
    let ys: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| {
            let noise = if e_bar > 0.0 { rng.gen_range(-e_bar..=e_bar) } else { 0.0 };
            vec![f.eval(x) + noise]
        })
        .collect();
    Dataset::from_rows(xs[0].len(), 1, xs, &ys).unwrap()
}

fn f1(x: f64) -> f64 {
    (std::f64::consts::TAU * x).cos().abs() + x
}

const F1_LIPSCHITZ: f64 = std::f64::consts::TAU + 1.0;

// 1
fn sample_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_margin = f64::INFINITY;
    for t in 0..100 {
        let d = 1 + t % 2;
        let e_bar = [0.0, 0.25, 0.5][t % 3];
        let n = rng.gen_range(2..200);
        let f = Wave::random(&mut rng);
        let xs = random_points(&mut rng, n, d);
        let data = noisy_dataset(&mut rng, &f, &xs, e_bar);
        let lambda = 2.0 * e_bar;
        let state = LackiState::fit(data.clone(), KiConfig::default().with_lambda(lambda)).unwrap();
        for (x, y) in data.iter() {
            let gap = (state.predict_scalar(x).unwrap() - y[0]).abs();
            worst_margin = worst_margin.min(lambda / 2.0 + 1e-9 - gap);
        }
    }
    check(worst_margin >= 0.0, format!("min slack to lambda/2 + 1e-9: {worst_margin:.3e}"))
}

// 2
fn incremental_equals_batch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for t in 0..200 {
        let d = 1 + t % 3;
        let n = rng.gen_range(1..150);
        let f = Wave::random(&mut rng);
        let xs = random_points(&mut rng, n, d);
        let data = noisy_dataset(&mut rng, &f, &xs, 0.1);
        let config = KiConfig::default()
            .with_lambda(rng.gen_range(0.0..0.3))
            .with_l_floor(rng.gen_range(0.0..0.5));
        let mut state = LackiState::empty(d, 1, config.clone()).unwrap();
        let mut start = 0;
        while start < n {
            let end = (start + rng.gen_range(1..=20)).min(n);
            state.update_constant(&data.slice(start..end)).unwrap();
            start = end;
        }
        let batch = estimate_constant_batch(&data, &config).unwrap();
        worst = worst.max((state.ell() - batch).abs() / batch.max(1.0));
    }
    check(worst <= 1e-12, format!("max scaled |incremental - batch|: {worst:.3e}"))
}

// 3
fn regularity_and_boundedness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let metrics = [
        InputMetric::MaxNorm,
        InputMetric::EuclideanNorm,
        InputMetric::WeightedMaxNorm { weights: vec![0.5, 2.0] },
    ];
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for model in 0..12 {
        let d = 2;
        let alpha = [1.0, 0.5, 0.75][model % 3];
        let metric = metrics[model % metrics.len()].clone();
        let e_bar = [0.0, 0.2][model % 2];
        let f = Wave::random(&mut rng);
        let xs = random_points(&mut rng, 60, d);
        let data = noisy_dataset(&mut rng, &f, &xs, 0.1);
        let config = KiConfig::default()
            .with_alpha(alpha)
            .with_lambda(0.1)
            .with_e_bar(e_bar)
            .with_metric(metric.clone());
        let state = LackiState::fit(data.clone(), config).unwrap();
        let ell = state.ell();
        let y_max = data.iter().map(|(_, y)| y[0].abs()).fold(0.0, f64::max);
        let mut diam = 0.0_f64;
        for (a, _) in data.iter() {
            for (b, _) in data.iter() {
                diam = diam.max(metric.distance(a, b).powf(alpha));
            }
        }
        let bound = y_max + ell / 2.0 * diam + e_bar;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..1.5)).collect();
            let xp: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..1.5)).collect();
            let (v, vp) = (state.predict_scalar(&x).unwrap(), state.predict_scalar(&xp).unwrap());
            if (v - vp).abs() > ell * metric.distance(&x, &xp).powf(alpha) + 1e-9 {
                violations += 1;
            }
            let far: Vec<f64> = (0..d).map(|_| rng.gen_range(-50.0..50.0)).collect();
            if state.predict_scalar(&far).unwrap().abs() > bound + 1e-9 {
                violations += 1;
            }
            pairs += 1;
        }
    }
    check(violations == 0, format!("{violations} violations over {pairs} pairs and far queries"))
}

// 4
fn noise_robust_constant() -> Outcome {
    let mut worst = 0.0_f64;
    for repeat in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + repeat);
        let mut state = LackiState::empty(1, 1, KiConfig::default().with_lambda(1.0)).unwrap();
        for n in 1..=4097usize {
            let x: f64 = rng.gen();
            let y = f1(x) + rng.gen_range(-0.5..=0.5);
            state.add_observation(&[x], &[y]).unwrap();
            if n.is_power_of_two() || n == 4097 {
                worst = worst.max(state.ell());
            }
        }
    }
    check(
        worst <= F1_LIPSCHITZ,
        format!("max ell over 20 repeats, n <= 4097: {worst:.4} (L* = {F1_LIPSCHITZ:.4})"),
    )
}

// 5
fn convergence_rate() -> Outcome {
    let test: Vec<f64> = (0..10_000).map(|k| (k as f64 + 0.5) / 10_000.0).collect();
    let mut errors = Vec::new();
    let mut detail = String::new();
    let mut ok = true;
    for k in 5..=12 {
        let n = (1usize << k) + 1;
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = i as f64 / (n - 1) as f64;
                (x, f1(x))
            })
            .collect();
        let state = LackiState::fit(Dataset::from_scalar_pairs(&pairs).unwrap(), KiConfig::default()).unwrap();
        let sup = test
            .iter()
            .map(|&x| (state.predict_scalar(&[x]).unwrap() - f1(x)).abs())
            .fold(0.0, f64::max);
        let fill = 1.0 / (2.0 * (n - 1) as f64);
        let bound = (state.ell() + F1_LIPSCHITZ) * fill;
        ok &= sup <= bound;
        if let Some(&prev) = errors.last() {
            let ratio: f64 = sup / prev;
            ok &= ratio <= 0.6;
            detail.push_str(&format!(" {ratio:.3}"));
        }
        errors.push(sup);
    }
    check(
        ok,
        format!("sup error within bound at all n; doubling ratios:{detail}"),
    )
}

// 6
fn noisy_regression_quality() -> Outcome {
    let spec = ExperimentSpec {
        target: Target::F1,
        d: 2,
        n_train: 1025,
        noise_halfwidth: 0.5,
        n_test: 25_000,
        n_repeats: 30,
        learner: KiConfig::default().with_lambda(1.0),
        lacki2_lambda: Some(0.0),
        include_linear: false,
        seed: 6,
    };
    let res = run_experiment(&spec).unwrap();
    let l1 = res.bundle("lacki").unwrap().rms.mean;
    let l0 = res.bundle("lacki2").unwrap().rms.mean;
    check(
        l1 < 0.5 && l1 < l0,
        format!("mean RMS: lambda=1 {l1:.4}, lambda=0 {l0:.4}"),
    )
}

// 7
fn exp2_sensitivity() -> Outcome {
    let spec = ExperimentSpec {
        target: Target::F2,
        d: 2,
        n_train: 4097,
        noise_halfwidth: 0.0,
        n_test: 25_000,
        n_repeats: 10,
        learner: KiConfig::default().with_lambda(1.0),
        lacki2_lambda: Some(0.0),
        include_linear: false,
        seed: 7,
    };
    let res = run_experiment(&spec).unwrap();
    let me1 = res.bundle("lacki").unwrap().me.mean;
    let me0 = res.bundle("lacki2").unwrap().me.mean;
    check(
        me0 < 0.05 && me1 > 5.0 * me0,
        format!("mean ME over 10 repeats: lambda=0 {me0:.4}, lambda=1 {me1:.4}"),
    )
}

/// Triangle wave in `x1` with slopes +-1, hence 1-Lipschitz in the max-norm.
fn sawtooth(x: &[f64]) -> f64 {
    ((x[0] * 4.0).rem_euclid(2.0) - 1.0).abs() / 4.0
}

// 8
fn sample_complexity_check() -> Outcome {
    let sc = sample_complexity(0.5, 0.1, 1.0, 1).unwrap();
    if sc != (SampleComplexity { k: 2, n: 13 }) {
        return Err(format!("complexity(0.5, 0.1, 1, 1) = {sc:?}"));
    }
    let mut detail = format!("k={} N={}", sc.k, sc.n);
    for d in [1usize, 2] {
        let (eps, delta) = (0.5, 0.1);
        let n = sample_complexity(eps, delta, 1.0, d).unwrap().n as usize;
        let grid: Vec<Vec<f64>> = if d == 1 {
            (0..=2000).map(|i| vec![i as f64 / 2000.0]).collect()
        } else {
            (0..=100)
                .flat_map(|i| (0..=100).map(move |j| vec![i as f64 / 100.0, j as f64 / 100.0]))
                .collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(80 + d as u64);
        let mut failures = 0;
        for _ in 0..200 {
            let xs = random_points(&mut rng, n, d);
            let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![sawtooth(x)]).collect();
            let data = Dataset::from_rows(d, 1, &xs, &ys).unwrap();
            let state = LackiState::fit(data, KiConfig::default()).unwrap();
            let sup = grid
                .iter()
                .map(|x| (state.predict_scalar(x).unwrap() - sawtooth(x)).abs())
                .fold(0.0, f64::max);
            if sup > eps {
                failures += 1;
            }
        }
        let frac = failures as f64 / 200.0;
        detail.push_str(&format!("; d={d}: N={n}, failure fraction {frac:.3}"));
        if frac > 2.0 * delta {
            return Err(detail);
        }
    }
    Ok(detail)
}

fn random_stable_system(rng: &mut ChaCha8Rng) -> ErrorSystem {
    loop {
        let m = rng.gen_range(1..=3);
        let delta = rng.gen_range(0.01..0.3);
        let k1 = DMatrix::from_fn(m, m, |i, j| if i == j { rng.gen_range(0.2..4.0) } else { rng.gen_range(-0.5..0.5) });
        let k2 = DMatrix::from_fn(m, m, |i, j| if i == j { rng.gen_range(0.2..4.0) } else { rng.gen_range(-0.5..0.5) });
        let nbar = rng.gen_range(0.0..2.0);
        let sys = ErrorSystem::assemble(m, delta, k1, k2, nbar).unwrap();
        if sys.spectral_radius() < 0.998 {
            return sys;
        }
    }
}

/// Checks dominance of all variants and recurrence/closed-form agreement.
fn dominance_on(sys: &ErrorSystem, rng: &mut ChaCha8Rng, steps: usize, bang_bang: bool) -> Result<(), String> {
    let dim = sys.dim();
    let nbar = sys.innovation_bound();
    let e0 = DVector::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0));
    let e0_norm = e0.amax();
    let innovations: Vec<DVector<f64>> = (0..steps)
        .map(|_| {
            DVector::from_fn(dim, |_, _| {
                if bang_bang {
                    if rng.gen::<bool>() { nbar } else { -nbar }
                } else {
                    rng.gen_range(-nbar..=nbar)
                }
            })
        })
        .collect();
    let trace = simulate_recurrence(sys, &e0, &innovations).map_err(|e| e.to_string())?;
    let report = bound_report(sys, e0_norm, steps);
    let tol = |b: f64| 1e-9 * b.abs().max(1.0);
    for (n, e) in trace.iter().enumerate() {
        let norm = e.amax();
        if norm > report.variant1[n] + tol(report.variant1[n]) {
            return Err(format!("variant 1 violated at n={n}: {norm} > {}", report.variant1[n]));
        }
        if let Some(v2) = &report.variant2 {
            if norm > v2.bounds[n] + tol(v2.bounds[n]) {
                return Err(format!("variant 2 violated at n={n}: {norm} > {}", v2.bounds[n]));
            }
        }
        if let Some(v3) = &report.variant3 {
            if norm > v3[n] + tol(v3[n]) {
                return Err(format!("variant 3 violated at n={n}: {norm} > {}", v3[n]));
            }
        }
    }
    for n in (0..=steps).step_by(steps / 4) {
        let closed = closed_form_state(sys, &e0, &innovations, n).map_err(|e| e.to_string())?;
        let diff = (&closed - &trace[n]).amax();
        if diff > 1e-8 * closed.amax().max(1.0) {
            return Err(format!("closed form differs by {diff:.3e} at n={n}"));
        }
    }
    Ok(())
}

// 9
fn bound_dominance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100 {
        let sys = random_stable_system(&mut rng);
        dominance_on(&sys, &mut rng, 5000, i % 2 == 0).map_err(|e| format!("system {i}: {e}"))?;
    }
    let wing = ErrorSystem::scalar(0.005, 1.0, 1.0, 1.0).unwrap();
    for bang in [false, true] {
        dominance_on(&wing, &mut rng, 5000, bang).map_err(|e| format!("wing-rock: {e}"))?;
    }
    Ok(format!(
        "100 random systems + wing-rock (rho = {:.6}) dominated for n <= 5000",
        wing.spectral_radius()
    ))
}

// 10
fn mrac_tracking() -> Outcome {
    let mut config = MracConfig::nominal();
    config.record_trajectory = true;
    let r = run_trial(&config).unwrap();
    let rows = r.trajectory.as_deref().unwrap();
    let head = &rows[..rows.len() / 20];
    let tail = &rows[rows.len() - rows.len() / 5..];
    let mean = |rs: &[lacki::mrac::TrajectoryRow], f: fn(&lacki::mrac::TrajectoryRow) -> f64| {
        rs.iter().map(f).sum::<f64>() / rs.len() as f64
    };
    let err = mean(tail, |r| r.error_norm()) / mean(head, |r| r.error_norm());
    let pred = mean(tail, |r| r.prediction_error()) / mean(head, |r| r.prediction_error());
    let ell = r.ell_final;
    check(
        !r.diverged && err <= 0.1 && pred <= 0.1 && ell > 1.0 && (1.0..=20.0).contains(&ell),
        format!("tail/head tracking {err:.2e}, prediction {pred:.2e}, ell_final {ell:.4}"),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

// 11
fn campaign_ordering() -> Outcome {
    let base = MracConfig {
        seed: 11,
        ..MracConfig::nominal()
    };
    let spec = Randomization::nominal();
    let adaptive = run_campaign(&base, 50, &spec).unwrap();
    let pd = run_campaign(&MracConfig { adaptive: false, ..base }, 50, &spec).unwrap();
    let med = |c: &[lacki::mrac::CampaignTrial]| median(c.iter().map(|t| t.record.log_xerr).collect());
    let (ma, mp) = (med(&adaptive), med(&pd));
    check(ma < mp, format!("median log-XERR: adaptive {ma:.4}, pd baseline {mp:.4}"))
}

/// Largest `|h(x) - h(x')| / |x - x'|^p` over random pairs in `[lo, hi]`.
fn empirical_ratio(rng: &mut ChaCha8Rng, h: impl Fn(f64) -> f64, p: f64, lo: f64, hi: f64) -> f64 {
    (0..10_000)
        .map(|_| {
            let (x, y) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            if x == y {
                0.0
            } else {
                (h(x) - h(y)).abs() / (x - y).abs().powf(p)
            }
        })
        .fold(0.0, f64::max)
}

// 12
fn holder_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let lip = |l: f64| HolderDescriptor::lipschitz(l).unwrap();
    let sin = lip(1.0).with_sup_abs(1.0).unwrap();
    let cos = sin;
    let ident = lip(1.0).with_sup_abs(1.0).unwrap(); // x on [-1, 1]
    let mut cases: Vec<(&str, f64, f64, f64)> = Vec::new(); // name, descriptor constant, ratio, exponent

    let s = sin.scale(-2.5);
    cases.push(("scale", s.constant, empirical_ratio(&mut rng, |x| -2.5 * x.sin(), 1.0, -5.0, 5.0), 1.0));
    let a = sin.add(&ident.abs_of()).unwrap();
    cases.push(("add", a.constant, empirical_ratio(&mut rng, |x| x.sin() + x.abs(), 1.0, -1.0, 1.0), 1.0));
    let m = sin.multiply(&ident).unwrap();
    cases.push(("multiply", m.constant, empirical_ratio(&mut rng, |x| x.sin() * x, 1.0, -1.0, 1.0), 1.0));
    let sq = sin.square().unwrap();
    cases.push(("square", sq.constant, empirical_ratio(&mut rng, |x| x.sin().powi(2), 1.0, -5.0, 5.0), 1.0));
    let root = HolderDescriptor::new(1.0, 0.5).unwrap();
    let c = root.compose(&lip(2.0));
    cases.push((
        "compose",
        c.constant,
        empirical_ratio(&mut rng, |x| (2.0 * x).abs().sqrt(), c.exponent, -1.0, 1.0),
        c.exponent,
    ));
    let e = HolderDescriptor::envelope(&[sin, cos, lip(0.5)]).unwrap();
    cases.push((
        "envelope",
        e.constant,
        empirical_ratio(&mut rng, |x| x.sin().max(x.cos()).max(0.5 * x), 1.0, -5.0, 5.0),
        1.0,
    ));
    let denom = HolderDescriptor::constant_fn(2.0, 1.0).unwrap().add(&sin).unwrap().with_inf_abs(1.0).unwrap();
    let r = denom.reciprocal().unwrap();
    cases.push(("reciprocal", r.constant, empirical_ratio(&mut rng, |x| 1.0 / (2.0 + x.sin()), 1.0, -5.0, 5.0), 1.0));
    cases.push(("abs", sin.abs_of().constant, empirical_ratio(&mut rng, |x| x.sin().abs(), 1.0, -5.0, 5.0), 1.0));
    let w = lip(1.0).weaken(0.5, 1.0).unwrap();
    cases.push(("weaken", w.constant, empirical_ratio(&mut rng, |x| x, 0.5, 0.0, 1.0), 0.5));
    let k = HolderDescriptor::constant_fn(5.0, 1.0).unwrap();
    cases.push(("constant", k.constant, empirical_ratio(&mut rng, |_| 5.0, 1.0, -5.0, 5.0), 1.0));

    // max{1 - 3 sin t, exp(-sin t)}; exp(-s) is e-Lipschitz on [-1, 1]
    let one = HolderDescriptor::constant_fn(1.0, 1.0).unwrap();
    let left = one.add(&sin.scale(-3.0)).unwrap();
    let exp_neg = lip(std::f64::consts::E);
    let right = exp_neg.compose(&sin);
    let worked = HolderDescriptor::envelope(&[left, right]).unwrap();
    let ratio = empirical_ratio(
        &mut rng,
        |t| (1.0 - 3.0 * t.sin()).max((-t.sin()).exp()),
        1.0,
        -10.0,
        10.0,
    );
    cases.push(("worked example", worked.constant, ratio, 1.0));
    if worked.constant != 3.0 {
        return Err(format!("worked example constant {} != 3", worked.constant));
    }
    // derivative oracle: sup |d/ds exp(-s)| over a grid of [-1, 1]
    let grad_sup = (0..=2000)
        .map(|i| (-(-1.0 + i as f64 / 1000.0_f64)).exp())
        .fold(0.0, f64::max);
    if grad_sup > exp_neg.constant + 1e-12 {
        return Err(format!("exp(-s) gradient sup {grad_sup} exceeds {}", exp_neg.constant));
    }

    // x -> L |x - s|^p is (L, p)-Hölder
    for p in [0.25, 0.5, 1.0] {
        let phi = move |x: f64| 2.0 * (x - 0.3).abs().powf(p);
        cases.push(("distance map", 2.0, empirical_ratio(&mut rng, phi, p, -2.0, 2.0), p));
    }

    let failed: Vec<String> = cases
        .iter()
        .filter(|(_, l, ratio, _)| *ratio > l + 1e-9)
        .map(|(n, l, ratio, p)| format!("{n}: ratio {ratio} > {l} (p = {p})"))
        .collect();
    if failed.is_empty() {
        Ok(format!("{} instantiations dominate 10^4-pair ratios; worked example L = 3", cases.len()))
    } else {
        Err(failed.join("; "))
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "sample consistency", limit: Duration::from_secs(10), run: sample_consistency },
        Criterion { id: 2, name: "incremental == batch", limit: Duration::from_secs(10), run: incremental_equals_batch },
        Criterion { id: 3, name: "regularity + boundedness", limit: Duration::from_secs(30), run: regularity_and_boundedness },
        Criterion { id: 4, name: "noise-robust constant", limit: Duration::from_secs(30), run: noise_robust_constant },
        Criterion { id: 5, name: "convergence rate", limit: Duration::from_secs(60), run: convergence_rate },
        Criterion { id: 6, name: "noisy regression quality", limit: Duration::from_secs(120), run: noisy_regression_quality },
        Criterion { id: 7, name: "noise-free sensitivity", limit: Duration::from_secs(120), run: exp2_sensitivity },
        Criterion { id: 8, name: "sample complexity", limit: Duration::from_secs(120), run: sample_complexity_check },
        Criterion { id: 9, name: "bound dominance", limit: Duration::from_secs(60), run: bound_dominance },
        Criterion { id: 10, name: "MRAC tracking", limit: Duration::from_secs(120), run: mrac_tracking },
        Criterion { id: 11, name: "campaign ordering", limit: Duration::from_secs(900), run: campaign_ordering },
        Criterion { id: 12, name: "Hölder calculus soundness", limit: Duration::from_secs(30), run: holder_soundness },
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let clock = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = clock.elapsed();
        let (pass, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let in_time = elapsed <= c.limit;
        if !in_time {
            detail.push_str(&format!("; over time limit {:?}", c.limit));
        }
        let ok = pass && in_time;
        failed += usize::from(!ok);
        println!(
            "{} [{:>2}] {:<26} {:>7.2}s  {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
