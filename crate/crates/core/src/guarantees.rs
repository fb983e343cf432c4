//! Closed-form guarantee calculators.
//!
//! Two families live here:
//!
//! - [`sample_complexity`]: how many uniform samples on `[0,1]^d` suffice for
//!   the worst-case error of a noise-free fit to stay below `epsilon` with
//!   probability at least `1 - delta`.
//! - Tracking-error bounds for the discrete error recurrence
//!   `e[n+1] = M e[n] + delta * F[n]` of a feedback-linearised second-order
//!   system with PD gains `K1`, `K2` (see [`ErrorSystem`]).
//!
//! Vector norms are max-norms. The matrix norm used throughout is
//! `|||A||| = sqrt(2m) * sigma_max(A)`, which is compatible with the
//! max-norm on `R^{2m}` and submultiplicative.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GuaranteeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("transition matrix is not stable (spectral radius {0})")]
    Unstable(f64),
    #[error("no k0 with |||M^k||| < 1 for all k >= k0 found below {0}")]
    K0NotFound(usize),
    #[error("geometric bound is singular: |||M||| = {0}")]
    SingularNorm(f64),
}

pub type Result<T> = std::result::Result<T, GuaranteeError>;

// ---------------------------------------------------------------------------
// Sample complexity
// ---------------------------------------------------------------------------

/// Result of [`sample_complexity`]: grid refinement level `k` and sample count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleComplexity {
    pub k: u32,
    pub n: u64,
}

/// Number of i.i.d. uniform samples on `[0,1]^d` after which a noise-free,
/// max-norm, `L*`-Lipschitz fit has worst-case error above `epsilon` with
/// probability at most `delta`.
///
/// With `k = ceil(log2(2 L* / epsilon))` the domain is cut into `2^{kd}`
/// cubes of edge `2^-k`; `n` is the smallest count for which the union bound
/// on "some cube is empty", `2^{kd} (1 - 2^{-kd})^n`, drops below `delta`.
/// When `epsilon >= 2 L*` a single sample is enough and `k = 0`.
pub fn sample_complexity(epsilon: f64, delta: f64, l_star: f64, d: usize) -> Result<SampleComplexity> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(GuaranteeError::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GuaranteeError::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
    }
    if !(l_star.is_finite() && l_star >= 0.0) {
        return Err(GuaranteeError::InvalidArgument(format!("L* must be finite and >= 0, got {l_star}")));
    }
    if d == 0 {
        return Err(GuaranteeError::InvalidArgument("dimension must be >= 1".into()));
    }
    if epsilon >= 2.0 * l_star {
        return Ok(SampleComplexity { k: 0, n: 1 });
    }
    let k = (2.0 * l_star / epsilon).log2().ceil();
    let kd = k * d as f64;
    let p = (-kd).exp2();
    // log2 keeps exact powers of two exact; 1 - p is exact while kd <= 52.
    let numerator = delta.log2() - kd;
    let denominator = if kd <= 52.0 {
        (1.0 - p).log2()
    } else {
        (-p).ln_1p() / std::f64::consts::LN_2
    };
    let n = (numerator / denominator).ceil();
    if !(n.is_finite() && n < u64::MAX as f64) {
        return Err(GuaranteeError::InvalidArgument(format!(
            "sample count overflows (k = {k}, d = {d})"
        )));
    }
    Ok(SampleComplexity {
        k: k as u32,
        n: (n as u64).max(1),
    })
}

// ---------------------------------------------------------------------------
// Error system
// ---------------------------------------------------------------------------

/// The discrete tracking-error recurrence `e[n+1] = M e[n] + delta * F[n]`.
///
/// `M = [[I, delta I], [-delta K1, I - delta K2]]` on `R^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSystem {
    m: usize,
    delta: f64,
    k1: DMatrix<f64>,
    k2: DMatrix<f64>,
    transition: DMatrix<f64>,
    innovation_bound: f64,
    spectral_radius: f64,
}

impl ErrorSystem {
    /// Assembles `M` blockwise and computes its spectral radius.
    pub fn assemble(
        m: usize,
        delta: f64,
        k1: DMatrix<f64>,
        k2: DMatrix<f64>,
        innovation_bound: f64,
    ) -> Result<Self> {
        if m == 0 {
            return Err(GuaranteeError::InvalidArgument("m must be >= 1".into()));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(GuaranteeError::InvalidArgument(format!("delta must be > 0, got {delta}")));
        }
        if !(innovation_bound.is_finite() && innovation_bound >= 0.0) {
            return Err(GuaranteeError::InvalidArgument(format!(
                "innovation bound must be finite and >= 0, got {innovation_bound}"
            )));
        }
        for k in [&k1, &k2] {
            if k.nrows() != m || k.ncols() != m {
                return Err(GuaranteeError::DimensionMismatch {
                    expected: m,
                    actual: if k.nrows() != m { k.nrows() } else { k.ncols() },
                });
            }
            if k.iter().any(|v| !v.is_finite()) {
                return Err(GuaranteeError::InvalidArgument("gain entries must be finite".into()));
            }
        }
        let eye = DMatrix::<f64>::identity(m, m);
        let mut t = DMatrix::<f64>::zeros(2 * m, 2 * m);
        t.view_mut((0, 0), (m, m)).copy_from(&eye);
        t.view_mut((0, m), (m, m)).copy_from(&(&eye * delta));
        t.view_mut((m, 0), (m, m)).copy_from(&(&k1 * -delta));
        t.view_mut((m, m), (m, m)).copy_from(&(&eye - &k2 * delta));
        let spectral_radius = spectral_radius(&t);
        Ok(Self {
            m,
            delta,
            k1,
            k2,
            transition: t,
            innovation_bound,
            spectral_radius,
        })
    }

    /// Scalar gains on a one-degree-of-freedom system (`m = 1`).
    pub fn scalar(delta: f64, k1: f64, k2: f64, innovation_bound: f64) -> Result<Self> {
        Self::assemble(
            1,
            delta,
            DMatrix::from_element(1, 1, k1),
            DMatrix::from_element(1, 1, k2),
            innovation_bound,
        )
    }

    pub fn half_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k1(&self) -> &DMatrix<f64> {
        &self.k1
    }

    pub fn k2(&self) -> &DMatrix<f64> {
        &self.k2
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn innovation_bound(&self) -> f64 {
        self.innovation_bound
    }

    pub fn with_innovation_bound(mut self, innovation_bound: f64) -> Self {
        self.innovation_bound = innovation_bound;
        self
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// `|||A||| = sqrt(2m) * sigma_max(A)`.
    pub fn matrix_norm(&self, a: &DMatrix<f64>) -> f64 {
        (self.dim() as f64).sqrt() * spectral_norm(a)
    }

    /// `|||M^i|||` for `i = 0..=n`.
    pub fn power_norms(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut power = DMatrix::<f64>::identity(self.dim(), self.dim());
        out.push(self.matrix_norm(&power));
        for _ in 0..n {
            if out.last() == Some(&f64::INFINITY) {
                out.push(f64::INFINITY);
                continue;
            }
            power = &self.transition * &power;
            out.push(self.matrix_norm(&power));
        }
        out
    }
}

/// Largest singular value; `inf` once any entry has overflowed.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if a.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    a.singular_values().max()
}

/// Largest eigenvalue modulus.
///
/// Uses a full (complex) eigen-decomposition up to dimension 64 and a
/// Gelfand estimate `|||A^{2^j}|||^{2^-j}` by repeated squaring beyond.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        return a
            .clone()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
    }
    let mut power = a.clone();
    let mut log_scale = 0.0_f64;
    let mut estimate = spectral_norm(a);
    for j in 1..=30 {
        let s = spectral_norm(&power);
        if s == 0.0 {
            return 0.0;
        }
        power /= s;
        log_scale = 2.0 * (log_scale + s.ln());
        power = &power * &power;
        let next = ((log_scale + spectral_norm(&power).ln()) / 2f64.powi(j)).exp();
        if (next - estimate).abs() <= 1e-10 * estimate.max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

// ---------------------------------------------------------------------------
// Recurrence
// ---------------------------------------------------------------------------

fn check_len(sys: &ErrorSystem, v: &DVector<f64>) -> Result<()> {
    if v.len() != sys.dim() {
        return Err(GuaranteeError::DimensionMismatch {
            expected: sys.dim(),
            actual: v.len(),
        });
    }
    Ok(())
}

/// Iterates the recurrence; returns `e[0..=innovations.len()]`.
pub fn simulate_recurrence(
    sys: &ErrorSystem,
    e0: &DVector<f64>,
    innovations: &[DVector<f64>],
) -> Result<Vec<DVector<f64>>> {
    check_len(sys, e0)?;
    let mut out = Vec::with_capacity(innovations.len() + 1);
    out.push(e0.clone());
    let mut e = e0.clone();
    for f in innovations {
        check_len(sys, f)?;
        e = sys.transition() * &e + f * sys.delta();
        out.push(e.clone());
    }
    Ok(out)
}

/// Closed-form state `M^n e0 + delta * sum_{i<n} M^{n-1-i} F[i]`.
///
/// Evaluated with explicit matrix powers, independently of the iteration in
/// [`simulate_recurrence`].
pub fn closed_form_state(
    sys: &ErrorSystem,
    e0: &DVector<f64>,
    innovations: &[DVector<f64>],
    n: usize,
) -> Result<DVector<f64>> {
    check_len(sys, e0)?;
    if n > innovations.len() {
        return Err(GuaranteeError::InvalidArgument(format!(
            "need {n} innovations, got {}",
            innovations.len()
        )));
    }
    let dim = sys.dim();
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(DMatrix::<f64>::identity(dim, dim));
    for i in 0..n {
        powers.push(sys.transition() * &powers[i]);
    }
    let mut acc = DVector::<f64>::zeros(dim);
    for (i, f) in innovations[..n].iter().enumerate() {
        check_len(sys, f)?;
        acc += &powers[n - 1 - i] * f;
    }
    Ok(&powers[n] * e0 + acc * sys.delta())
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// `a * b`, except that a zero factor wins over an overflowed one.
fn times(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Variant 1 from precomputed power norms and an explicit innovation bound:
/// `|||M^n||| e0 + delta * nbar * sum_{i<n} |||M^i|||`.
pub fn variant_1_from_norms(norms: &[f64], delta: f64, e0_norm: f64, n: usize, nbar: f64) -> f64 {
    let sum: f64 = norms[..n].iter().sum();
    times(norms[n], e0_norm) + times(delta * nbar, sum)
}

/// Partial-sum bound `|||M^n||| |e0| + delta * Nbar * sum_{i<n} |||M^i|||`.
pub fn bound_variant_1(sys: &ErrorSystem, e0_norm: f64, n: usize) -> f64 {
    let norms = sys.power_norms(n);
    variant_1_from_norms(&norms, sys.delta, e0_norm, n, sys.innovation_bound)
}

/// Variant 1 for every `n = 0..=horizon`.
pub fn bound_variant_1_series(sys: &ErrorSystem, e0_norm: f64, horizon: usize) -> Vec<f64> {
    let norms = sys.power_norms(horizon);
    let mut sum = 0.0;
    norms
        .iter()
        .map(|&p| {
            let b = p * e0_norm + sys.delta * sys.innovation_bound * sum;
            sum += p;
            b
        })
        .collect()
}

/// Limit of variant 1 as `n -> inf` for a stable `M`.
///
/// Summation stops once the term falls below `1e-12` of the partial sum for
/// ten consecutive powers.
pub fn variant_1_asymptote(sys: &ErrorSystem) -> Result<f64> {
    if sys.spectral_radius >= 1.0 {
        return Err(GuaranteeError::Unstable(sys.spectral_radius));
    }
    let mut power = DMatrix::<f64>::identity(sys.dim(), sys.dim());
    let mut sum = 0.0;
    let mut small = 0;
    for _ in 0..10_000_000usize {
        let term = sys.matrix_norm(&power);
        sum += term;
        if term < 1e-12 * sum {
            small += 1;
            if small >= 10 {
                return Ok(sys.delta * sys.innovation_bound * sum);
            }
        } else {
            small = 0;
        }
        power = sys.transition() * &power;
    }
    Err(GuaranteeError::K0NotFound(10_000_000))
}

/// Which admissible constant produced `c` in variant 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CChoice {
    /// Largest power norm below `k0` (at least one).
    PowerMax,
    /// Closed form in terms of the spectral radius and the dimension.
    SpectralClosedForm,
    /// `|||M|||^{k0}`.
    NormPower,
}

/// Block-geometric parameters of variant 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant2Params {
    /// Smallest `k0 > 1` with `|||M^k||| < 1` for every `k >= k0`.
    pub k0: usize,
    /// `|||M^{k0}|||`.
    pub phi: f64,
    pub c: f64,
    pub c_choice: CChoice,
    /// Candidates for `c` in the order (power max, closed form, norm power).
    /// `None` when a candidate is undefined or not a valid majorant.
    pub c_candidates: [Option<f64>; 3],
    /// `sum_{j<k0} |||M^j|||`.
    pub head_sum: f64,
}

impl Variant2Params {
    /// Bound on `|e[n]|` for the given initial error norm and innovation bound.
    pub fn bound(&self, delta: f64, e0_norm: f64, nbar: f64, n: usize) -> f64 {
        let blocks = (n / self.k0) as i32;
        let phi_b = self.phi.powi(blocks);
        let tail = self.c * self.k0 as f64 * (self.phi - phi_b * self.phi) / (1.0 - self.phi);
        self.c * phi_b * e0_norm + delta * nbar * (self.head_sum + tail)
    }

    /// `lim_{n->inf}` of [`Variant2Params::bound`].
    pub fn asymptote(&self, delta: f64, nbar: f64) -> f64 {
        delta * nbar * self.head_sum + delta * nbar * self.c * self.k0 as f64 * self.phi / (1.0 - self.phi)
    }
}

/// Upper limit on the `k0` search.
pub const K0_SEARCH_CAP: usize = 1_000_000;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Derives `k0`, `phi` and `c` for variant 2.
///
/// `k0` is found by scanning power norms: with `v` the last power seen so far
/// whose norm is `>= 1`, the candidate is `k0 = max(2, v + 1)`; it is
/// accepted once the powers `k0..2k0` all have norm below one, since every
/// `k >= k0` factors as `a*k0 + j` with `j` in that window.
///
/// `c` must majorise `|||M^j|||` for `1 <= j < k0` and must be at least one,
/// because block-aligned powers `M^{b k0}` are bounded by `phi^b` alone.
/// All three textbook candidates are computed; those failing this
/// requirement are discarded and the smallest survivor is used.
pub fn variant_2_params(sys: &ErrorSystem) -> Result<Variant2Params> {
    let r = sys.spectral_radius;
    if r >= 1.0 {
        return Err(GuaranteeError::Unstable(r));
    }
    let mut norms = vec![sys.matrix_norm(&DMatrix::identity(sys.dim(), sys.dim()))];
    let mut power = DMatrix::<f64>::identity(sys.dim(), sys.dim());
    let mut last_violation = 0usize;
    let k0 = loop {
        let k = norms.len();
        if k > K0_SEARCH_CAP {
            return Err(GuaranteeError::K0NotFound(K0_SEARCH_CAP));
        }
        power = sys.transition() * &power;
        let norm = sys.matrix_norm(&power);
        norms.push(norm);
        if norm >= 1.0 {
            last_violation = k;
        }
        let candidate = (last_violation + 1).max(2);
        if k >= 2 * candidate - 1 {
            break candidate;
        }
    };
    let phi = norms[k0];
    let required = norms[1..k0].iter().copied().fold(1.0, f64::max);
    let head_sum: f64 = norms[..k0].iter().sum();

    let d = sys.dim();
    let m_norm = norms[1];
    let c_power_max = Some(required);
    let c_closed = if r > 0.0 && d >= 2 {
        let t = (1.0 - d as f64) / r.ln();
        let v = t.powi(d as i32 - 1) / factorial(d - 1)
            * m_norm.powi(d as i32 - 1)
            * r.powf(t - d as f64 + 1.0);
        Some(v).filter(|v| v.is_finite())
    } else {
        None
    };
    let c_norm_power = Some(m_norm.powi(k0 as i32)).filter(|v| v.is_finite());

    let admissible = |c: Option<f64>| c.filter(|&c| c >= required);
    let c_candidates = [
        admissible(c_power_max),
        admissible(c_closed),
        admissible(c_norm_power),
    ];
    let choices = [CChoice::PowerMax, CChoice::SpectralClosedForm, CChoice::NormPower];
    let (c, c_choice) = c_candidates
        .iter()
        .zip(choices)
        .filter_map(|(c, ch)| c.map(|c| (c, ch)))
        .fold((f64::INFINITY, CChoice::PowerMax), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        });
    Ok(Variant2Params {
        k0,
        phi,
        c,
        c_choice,
        c_candidates,
        head_sum,
    })
}

/// Block-geometric bound; returns the bound at `n` with its parameters.
pub fn bound_variant_2(sys: &ErrorSystem, e0_norm: f64, n: usize) -> Result<(f64, Variant2Params)> {
    let p = variant_2_params(sys)?;
    let b = p.bound(sys.delta, e0_norm, sys.innovation_bound, n);
    Ok((b, p))
}

/// Geometric bound `q^n |e0| + delta * Nbar * (1 - q^n) / (1 - q)` with `q = |||M|||`.
pub fn bound_variant_3(sys: &ErrorSystem, e0_norm: f64, n: usize) -> Result<f64> {
    let q = sys.matrix_norm(sys.transition());
    variant_3_from_norm(q, sys.delta, e0_norm, sys.innovation_bound, n)
}

pub fn variant_3_from_norm(q: f64, delta: f64, e0_norm: f64, nbar: f64, n: usize) -> Result<f64> {
    if (q - 1.0).abs() < 1e-12 {
        return Err(GuaranteeError::SingularNorm(q));
    }
    let qn = q.powi(n as i32);
    Ok(times(qn, e0_norm) + times(delta * nbar, (1.0 - qn) / (1.0 - q)))
}

/// All three bound variants over `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub spectral_radius: f64,
    /// `|||M|||`.
    pub transition_norm: f64,
    #[serde(with = "crate::ext_real::vec")]
    pub variant1: Vec<f64>,
    /// `None` when `M` is unstable.
    pub variant1_asymptote: Option<f64>,
    pub variant2: Option<Variant2Report>,
    /// `None` when `|||M||| == 1`. Overflows to `inf` when `|||M||| > 1`.
    #[serde(with = "crate::ext_real::opt_vec", default)]
    pub variant3: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant2Report {
    pub params: Variant2Params,
    #[serde(with = "crate::ext_real::vec")]
    pub bounds: Vec<f64>,
    pub asymptote: f64,
}

pub fn bound_report(sys: &ErrorSystem, e0_norm: f64, horizon: usize) -> BoundReport {
    let norms = sys.power_norms(horizon);
    let (delta, nbar) = (sys.delta, sys.innovation_bound);
    let mut sum = 0.0;
    let variant1 = norms
        .iter()
        .map(|&p| {
            let b = times(p, e0_norm) + times(delta * nbar, sum);
            sum += p;
            b
        })
        .collect();
    let variant2 = variant_2_params(sys).ok().map(|params| Variant2Report {
        bounds: (0..=horizon)
            .map(|n| params.bound(delta, e0_norm, nbar, n))
            .collect(),
        asymptote: params.asymptote(delta, nbar),
        params,
    });
    let q = norms.get(1).copied().unwrap_or_else(|| sys.matrix_norm(sys.transition()));
    let variant3 = (0..=horizon)
        .map(|n| variant_3_from_norm(q, delta, e0_norm, nbar, n))
        .collect::<Result<Vec<_>>>()
        .ok();
    BoundReport {
        spectral_radius: sys.spectral_radius,
        transition_norm: q,
        variant1,
        variant1_asymptote: variant_1_asymptote(sys).ok(),
        variant2,
        variant3,
    }
}
