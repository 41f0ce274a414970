//! Square-integrability of `μ̂^k`: the exact threshold `k* = 1 + n/|Φ|`,
//! dyadic-shell Monte Carlo estimates of `∫ |A|^{2k} / |Π<α,H>|^{2k-2}` over
//! the chamber, slope-based verdicts, the rank-one oracle, a recurrence probe
//! for the polar factor and the corollary exponents.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{combine, dot, mix_seed, norm, sphere_area, Neumaier};
use crate::orbital_fourier::IntegrandSpec;
use crate::rational::{cmp_f64_rat, int, rat, serialize_opt_rat, serialize_rat, Rat};
use crate::root_systems::{build_root_system, ProductRootSystem, RootSystem};
use crate::subroot_systems::{epsilon0, simple_subsystem};

/// Samples per deterministic RNG stream.
pub const CHUNK: usize = 4096;
pub const MIN_SAMPLES: usize = 1000;
pub const MIN_SHELLS: usize = 6;
/// A fitted slope at or below this certifies convergence.
pub const CONVERGE_SLOPE: f64 = -0.3;
/// A fitted slope at or above this, with `k <= k*`, certifies divergence.
pub const DIVERGE_SLOPE: f64 = -0.1;
/// Rejection sampling of chamber directions accepts with probability
/// `1/|W|`; below this rate the sampler refuses to run.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// `1 + n/|Φ|` for an irreducible system, checked against
/// `(n + |Φ|)/|Φ|` and `dim/(dim - rank)`.
pub fn k_star(rs: &RootSystem) -> Result<Rat> {
    if !rs.is_irreducible() {
        return Err(Error::InvalidArgument(format!(
            "{} is reducible; use the reducible threshold",
            rs.label()
        )));
    }
    let (a, b, c) = threshold_forms(rs);
    if a != b || b != c {
        return Err(Error::Certification(format!(
            "threshold forms disagree for {}: {a}, {b}, {c}",
            rs.label()
        )));
    }
    Ok(a)
}

/// The three expressions `1 + n/|Φ|`, `(n + |Φ|)/|Φ|` and `dim/(dim - rank)`
/// with `dim = n + |Φ|`.
pub fn threshold_forms(rs: &RootSystem) -> (Rat, Rat, Rat) {
    let n = rs.rank() as i64;
    let roots = rs.root_count() as i64;
    let dim = rs.lie_algebra_dim() as i64;
    (int(1) + rat(n, roots), rat(n + roots, roots), rat(dim, dim - n))
}

/// `max_i (1 + r_i/|Φ_i|)` over the factors.
pub fn reducible_k_star(prs: &ProductRootSystem) -> Result<Rat> {
    prs.factors()
        .iter()
        .map(k_star)
        .try_fold(None, |best: Option<Rat>, k| {
            let k = k?;
            Ok(Some(best.map_or(k, |b| b.max(k))))
        })?
        .ok_or(Error::Empty("factor list"))
}

/// The threshold of any system: `k*` when irreducible, otherwise the maximum
/// over its irreducible components.
pub fn threshold(rs: &RootSystem) -> Result<Rat> {
    if rs.is_irreducible() {
        return k_star(rs);
    }
    let mut best = None;
    for ty in rs.components() {
        let k = k_star(&build_root_system(ty.family, ty.rank)?)?;
        best = Some(best.map_or(k, |b: Rat| b.max(k)));
    }
    best.ok_or(Error::Empty("component list"))
}

/// Per-shell growth exponent `max_Ψ (n - m - (|Φ| - |Ψ|)(k - 1))` over
/// proper simple subsystems Ψ (Ψ = ∅ gives `n - |Φ|(k-1)`). Slabs around the
/// walls of Ψ dominate the bulk once `k > 1 + m/|Ψ|`.
pub fn stratified_slope(rs: &RootSystem, k: f64) -> f64 {
    let n = rs.rank();
    let roots = rs.root_count() as f64;
    let bulk = n as f64 - roots * (k - 1.0);
    (1u32..(1u32 << n) - 1)
        .map(|mask| {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let psi = simple_subsystem(rs, &subset).expect("non-empty subset");
            (n - psi.m()) as f64 - (roots - psi.size() as f64) * (k - 1.0)
        })
        .fold(bulk, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellEstimate {
    pub r_lo: f64,
    pub r_hi: f64,
    pub mass: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Sampling parameters shared by shell estimates and scans.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend on
    /// this value.
    pub workers: Option<usize>,
}

impl Sampling {
    pub fn new(samples: usize, seed: u64) -> Self {
        Sampling {
            samples,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Clone, Copy, Default)]
struct ChunkSum {
    sum: Neumaier,
    sq: Neumaier,
}

#[cfg(feature = "parallel")]
fn run_chunks<T, F>(count: usize, workers: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match workers {
        Some(1) => Ok((0..count).map(f).collect()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Sampling(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
        }
        None => Ok((0..count).into_par_iter().map(f).collect()),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<T, F>(count: usize, _workers: Option<usize>, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> T,
{
    Ok((0..count).map(f).collect())
}

/// A uniformly distributed unit vector of the open chamber, by rejection
/// from the Gaussian.
fn chamber_direction<R: Rng>(spec: &IntegrandSpec, rng: &mut R, out: &mut [f64]) {
    loop {
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        if spec.positive_roots().all(|a| dot(a, out) > 0.0) {
            let n = norm(out);
            out.iter_mut().for_each(|x| *x /= n);
            return;
        }
    }
}

fn check_acceptance(spec: &IntegrandSpec) -> Result<()> {
    let rate = 1.0 / spec.weyl_order() as f64;
    if rate < MIN_ACCEPTANCE {
        return Err(Error::Sampling(format!(
            "chamber acceptance rate 1/{} is below {MIN_ACCEPTANCE}; \
             rejection sampling is impractical here, use an analytic sector bound",
            spec.weyl_order()
        )));
    }
    Ok(())
}

/// Volume of the chamber part of the shell `r <= ‖H‖ <= 2r`.
pub fn chamber_shell_volume(rank: usize, weyl_order: usize, r: f64) -> f64 {
    let n = rank as i32;
    sphere_area(rank) / weyl_order as f64 * ((2.0 * r).powi(n) - r.powi(n)) / rank as f64
}

fn shell_mass_indexed(spec: &IntegrandSpec, r: f64, sampling: &Sampling, shell: u64) -> Result<ShellEstimate> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("shell radius {r} must be >= 1")));
    }
    if sampling.samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "{} samples per shell is below the minimum of {MIN_SAMPLES}",
            sampling.samples
        )));
    }
    check_acceptance(spec)?;
    let n = spec.rank();
    let total = sampling.samples;
    let (lo, hi) = (r.powi(n as i32), (2.0 * r).powi(n as i32));
    let chunks = total.div_ceil(CHUNK);
    let sums = run_chunks(chunks, sampling.workers, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[sampling.seed, shell, c as u64]));
        let mut theta = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut acc = ChunkSum::default();
        for i in c * CHUNK..total.min((c + 1) * CHUNK) {
            chamber_direction(spec, &mut rng, &mut theta);
            // stratified in the radial CDF
            let u = (i as f64 + rng.random::<f64>()) / total as f64;
            let t = (lo + u * (hi - lo)).powf(1.0 / n as f64);
            for (xi, th) in x.iter_mut().zip(&theta) {
                *xi = t * th;
            }
            let f = spec.integrand_local(&x);
            acc.sum.add(f);
            acc.sq.add(f * f);
        }
        acc
    })?;
    let mut sum = Neumaier::default();
    let mut sq = Neumaier::default();
    for c in &sums {
        sum.add(c.sum.total());
        sq.add(c.sq.total());
    }
    let count = total as f64;
    let mean = sum.total() / count;
    let var = ((sq.total() / count - mean * mean) * count / (count - 1.0)).max(0.0);
    let volume = chamber_shell_volume(n, spec.weyl_order(), r);
    Ok(ShellEstimate {
        r_lo: r,
        r_hi: 2.0 * r,
        mass: volume * mean,
        std_error: volume * (var / count).sqrt(),
        samples: total,
    })
}

/// Monte Carlo estimate of the integral over the chamber part of the shell
/// `r <= ‖H‖ <= 2r`.
pub fn shell_mass(spec: &IntegrandSpec, r: f64, samples: usize, seed: u64) -> Result<ShellEstimate> {
    shell_mass_indexed(spec, r, &Sampling::new(samples, seed), 0)
}

pub fn shell_mass_with(spec: &IntegrandSpec, r: f64, sampling: &Sampling) -> Result<ShellEstimate> {
    shell_mass_indexed(spec, r, sampling, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl Verdict {
    pub fn is_decisive(self) -> bool {
        self != Verdict::Inconclusive
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converges => "converges",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub system: String,
    pub k: f64,
    #[serde(serialize_with = "serialize_opt_rat", skip_serializing_if = "Option::is_none")]
    pub k_exact: Option<Rat>,
    #[serde(serialize_with = "serialize_rat")]
    pub k_star: Rat,
    #[serde(serialize_with = "serialize_opt_rat")]
    pub epsilon0: Option<Rat>,
    /// `<H0, β_i>` for each simple root.
    pub h0: Vec<f64>,
    pub r0: f64,
    pub seed: u64,
    pub samples: usize,
    pub shells: Vec<ShellEstimate>,
    /// Index of the first shell used in the fit.
    pub fit_from: usize,
    pub fitted_slope: f64,
    pub theory_slope: f64,
    pub stratified_slope: f64,
    /// Geometric extrapolation of the mass beyond the last shell; `null`
    /// when the fitted slope is not negative.
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guidance: Option<String>,
}

/// Least-squares slope of `ys` against `0, 1, 2, …`.
pub fn fit_slope(ys: &[f64]) -> f64 {
    let m = ys.len() as f64;
    let xbar = (m - 1.0) / 2.0;
    let ybar = ys.iter().sum::<f64>() / m;
    let (num, den) = ys.iter().enumerate().fold((0.0, 0.0), |(num, den), (i, y)| {
        let dx = i as f64 - xbar;
        (num + dx * (y - ybar), den + dx * dx)
    });
    num / den
}

/// Shell masses at `r = r0 2^j` for `j < shells`, the slope of `log₂ mass`
/// over the last `shells/2` shells and the resulting verdict.
pub fn convergence_scan(spec: &IntegrandSpec, shells: usize, r0: f64, sampling: &Sampling) -> Result<ConvergenceReport> {
    if shells < MIN_SHELLS {
        return Err(Error::InvalidArgument(format!(
            "{shells} shells is below the minimum of {MIN_SHELLS}"
        )));
    }
    let rs = spec.root_system();
    let k_star = threshold(rs)?;
    let estimates = (0..shells)
        .map(|j| shell_mass_indexed(spec, r0 * 2f64.powi(j as i32), sampling, j as u64))
        .collect::<Result<Vec<_>>>()?;
    let fit_from = shells - shells / 2;
    let logs = estimates[fit_from..]
        .iter()
        .map(|s| {
            if s.mass > 0.0 {
                Ok(s.mass.log2())
            } else {
                Err(Error::Sampling(format!("shell at r = {} has zero mass", s.r_lo)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted = fit_slope(&logs);
    let k = spec.k();
    let theory = rs.rank() as f64 - rs.root_count() as f64 * (k - 1.0);
    let last = estimates.last().expect("at least six shells").mass;
    let tail_bound = (fitted < 0.0).then(|| {
        let q = fitted.exp2();
        last * q / (1.0 - q)
    });
    let k_at_most_threshold = match spec.k_exact() {
        Some(exact) => exact <= k_star,
        None => cmp_f64_rat(k, &k_star) != Ordering::Greater,
    };
    let (verdict, guidance) = if fitted <= CONVERGE_SLOPE && tail_bound.is_some() {
        (Verdict::Converges, None)
    } else if fitted >= DIVERGE_SLOPE && k_at_most_threshold {
        (Verdict::Diverges, None)
    } else if fitted >= DIVERGE_SLOPE {
        (
            Verdict::Inconclusive,
            Some(format!(
                "slope {fitted:.3} does not decay although k exceeds k* = {k_star}; \
                 add shells or samples to reach the asymptotic regime"
            )),
        )
    } else {
        (
            Verdict::Inconclusive,
            Some(format!(
                "slope {fitted:.3} lies between {DIVERGE_SLOPE} and {CONVERGE_SLOPE}; \
                 k is close to k* = {k_star}, add shells or samples"
            )),
        )
    };
    Ok(ConvergenceReport {
        system: rs.label(),
        k,
        k_exact: spec.k_exact(),
        k_star,
        epsilon0: if rs.is_irreducible() { epsilon0(rs).ok() } else { None },
        h0: spec.h0().pairings(rs),
        r0,
        seed: sampling.seed,
        samples: sampling.samples,
        shells: estimates,
        fit_from,
        fitted_slope: fitted,
        theory_slope: theory,
        stratified_slope: stratified_slope(rs, k),
        tail_bound,
        verdict,
        guidance,
    })
}

/// Parameters of [`almost_period_probe`].
#[derive(Clone, Copy, Debug)]
pub struct ProbeParams {
    /// Half-width of the interval on which `f > ε` must hold.
    pub delta: f64,
    /// Level `ε`; `None` takes a quarter of `f(r0)`.
    pub epsilon: Option<f64>,
    /// Window length `N`.
    pub window: f64,
    pub windows: usize,
    /// Chamber directions tried in the coarse search for `(θ, r0)`.
    pub directions: usize,
    pub seed: u64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            delta: 0.05,
            epsilon: None,
            window: 40.0,
            windows: 20,
            directions: 16,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlmostPeriodProbe {
    pub system: String,
    pub k: f64,
    /// Unit direction θ in ambient coordinates.
    pub direction: Vec<f64>,
    pub r0: f64,
    pub f_r0: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub window: f64,
    /// Translation `τ_n` found in window `n`, or `null` if none was found.
    pub recurrences: Vec<Option<f64>>,
    pub missed_windows: usize,
}

/// The polar factor `f(r) = |A(rθ)|^{2k}/|Π<α,θ>|^{2k-2}` along a fixed
/// chamber direction. Locates a starting point where `f(r0) > 2ε` and then,
/// in each window `[r0 + nN, r0 + (n+1)N]`, the radius `r` maximizing
/// `min f` over `[r - δ, r + δ]`, recorded as `τ_n = r - r0` when that
/// minimum exceeds ε.
pub fn almost_period_probe(spec: &IntegrandSpec, params: &ProbeParams) -> Result<AlmostPeriodProbe> {
    let ProbeParams {
        delta,
        epsilon,
        window,
        windows,
        directions,
        seed,
    } = *params;
    if !(delta > 0.0 && window > 4.0 * delta && window.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < 4δ < N, got δ = {delta}, N = {window}"
        )));
    }
    if windows == 0 || directions == 0 {
        return Err(Error::InvalidArgument("windows and directions must be positive".into()));
    }
    check_acceptance(spec)?;
    let step = delta / 4.0;
    let grid = |lo: f64, hi: f64| {
        let count = ((hi - lo) / step).floor() as usize + 1;
        (0..count).map(move |i| lo + i as f64 * step)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0x5052_4f42]));
    let mut theta = vec![0.0; spec.rank()];
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for _ in 0..directions {
        chamber_direction(spec, &mut rng, &mut theta);
        for r in grid(1.0 + delta, 1.0 + window - delta) {
            let f = spec.polar_factor(&theta, r);
            if best.as_ref().is_none_or(|b| f > b.0) {
                best = Some((f, r, theta.clone()));
            }
        }
    }
    let (f_r0, r0, theta) = best.expect("at least one direction");
    if !(f_r0 > 0.0) {
        return Err(Error::Probe(format!(
            "the polar factor vanished on all {directions} search directions; raise the search budget"
        )));
    }
    let eps = epsilon.unwrap_or(f_r0 / 4.0);
    if !(eps > 0.0 && f_r0 > 2.0 * eps) {
        return Err(Error::Probe(format!(
            "f(r0) = {f_r0} does not exceed 2ε = {}; lower ε or widen the search",
            2.0 * eps
        )));
    }
    let half = (delta / step).round() as usize;
    let mut recurrences = Vec::with_capacity(windows);
    for w in 1..=windows {
        let lo = r0 + w as f64 * window;
        let values: Vec<f64> = grid(lo, lo + window).map(|r| spec.polar_factor(&theta, r)).collect();
        let found = (half..values.len().saturating_sub(half))
            .map(|i| (i, values[i - half..=i + half].iter().copied().fold(f64::INFINITY, f64::min)))
            .filter(|&(_, m)| m > eps)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| lo + i as f64 * step - r0);
        recurrences.push(found);
    }
    Ok(AlmostPeriodProbe {
        system: spec.label(),
        k: spec.k(),
        direction: combine(spec.basis(), &theta),
        r0,
        f_r0,
        delta,
        epsilon: eps,
        window,
        missed_windows: recurrences.iter().filter(|r| r.is_none()).count(),
        recurrences,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub system: String,
    pub rank: usize,
    pub dim: usize,
    #[serde(serialize_with = "serialize_rat")]
    pub k_star: Rat,
    /// Whether `3/2 > k*`, i.e. `μ̂^{3/2}` is square-integrable.
    pub three_halves_above_threshold: bool,
    /// `3/2 = k*` (only `A1`): the strict inequality fails.
    pub boundary_case: bool,
    /// `dim/rank`: `μ²` lies in `L^p` for every `p < dim/rank`.
    #[serde(serialize_with = "serialize_rat")]
    pub dim_over_rank: Rat,
    /// `p(g) = 1 + rank/(2 dim - rank)`.
    #[serde(serialize_with = "serialize_rat")]
    pub p_g: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn corollary_report(rs: &RootSystem) -> Result<CorollaryReport> {
    let k = k_star(rs)?;
    let three_halves = rat(3, 2);
    let n = rs.rank() as i64;
    let dim = rs.lie_algebra_dim() as i64;
    let boundary = three_halves == k;
    Ok(CorollaryReport {
        system: rs.label(),
        rank: rs.rank(),
        dim: rs.lie_algebra_dim(),
        k_star: k,
        three_halves_above_threshold: three_halves > k,
        boundary_case: boundary,
        dim_over_rank: rat(dim, n),
        p_g: int(1) + rat(n, 2 * dim - n),
        note: boundary.then(|| {
            "3/2 equals k*: the strict inequality fails, so the corollary does not cover this system".to_string()
        }),
    })
}
