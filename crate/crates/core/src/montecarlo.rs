//! Monte Carlo estimators for strip occupancy, two-piece position and
//! cosine moments on minimal instances and submersions.
//!
//! All estimators are pure functions of their inputs and the
//! [`SeedStream`]; the sample count is split into fixed chunks whose results
//! are reduced in chunk order, so the worker count never changes a result.

use crate::bounds::{main1_bound, main2_best_delta, main2_bound};
use crate::manifolds::{
    CliffordTorus, GreatSubsphere, MinimalInstance, ProductSubmersion, Sampler, UniformSphere,
};
use crate::moments::cos_moment;
use crate::rng::{map_chunks, SeedStream};
use crate::sphere::{check_epsilon, dot, norm, strip_fraction_from_sine};
use crate::{Error, Point, Result};

/// Width of every statistical acceptance band, in standard errors.
pub const CONFIDENCE_SIGMAS: f64 = 4.0;

/// Sample count, random stream and worker count for an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub samples: usize,
    pub stream: SeedStream,
    /// Threads to use; affects speed only.
    pub workers: usize,
}

impl Sampling {
    pub fn new(samples: usize, stream: SeedStream) -> Self {
        Self {
            samples,
            stream,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::domain("samples", 0, "samples >= 1"));
        }
        Ok(())
    }
}

/// Monte Carlo estimate of `vol(x⁻¹(Ω(p, ε))) / vol(Σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyEstimate {
    pub fraction: f64,
    pub stderr: f64,
    pub hits: u64,
    pub sample_count: usize,
    pub seed: SeedStream,
}

impl OccupancyEstimate {
    fn from_counts(hits: u64, sampling: &Sampling) -> Self {
        let n = sampling.samples as f64;
        let fraction = hits as f64 / n;
        Self {
            fraction,
            stderr: binomial_stderr(fraction, sampling.samples),
            hits,
            sample_count: sampling.samples,
            seed: sampling.stream,
        }
    }

    /// `|fraction − value| ≤ 4·stderr`.
    pub fn consistent_with(&self, value: f64) -> bool {
        (self.fraction - value).abs() <= CONFIDENCE_SIGMAS * self.stderr
    }

    /// `fraction + 4·stderr ≥ max(0, bound)`.
    pub fn dominates(&self, bound: f64) -> bool {
        self.fraction + CONFIDENCE_SIGMAS * self.stderr >= bound.max(0.0)
    }
}

/// Plug-in binomial standard error `√(f(1−f)/N)`, floored at `1/(2N)` when
/// `f` is 0 or 1.
pub fn binomial_stderr(fraction: f64, samples: usize) -> f64 {
    let n = samples as f64;
    if fraction <= 0.0 || fraction >= 1.0 {
        return 1.0 / (2.0 * n);
    }
    (fraction * (1.0 - fraction) / n).sqrt()
}

fn check_point<S: Sampler + ?Sized>(sampler: &S, p: &Point) -> Result<()> {
    if p.ambient_dimension() != sampler.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: sampler.ambient_dim(),
            found: p.ambient_dimension(),
        });
    }
    Ok(())
}

/// Calls `visit(⟨p, x⟩)` for every sample `x` of one chunk.
fn for_each_cosine<S, A, F>(
    sampler: &S,
    p: &Point,
    sampling: &Sampling,
    init: A,
    visit: F,
) -> Vec<A>
where
    S: Sampler + ?Sized,
    A: Send + Sync + Clone,
    F: Fn(&mut A, f64) + Sync,
{
    let len = sampler.ambient_dim() + 1;
    let pc = p.coords();
    map_chunks(
        sampling.samples,
        sampling.stream,
        sampling.workers,
        |rng, count| {
            let mut acc = init.clone();
            let mut x = vec![0.0; len];
            for _ in 0..count {
                sampler.sample_into(rng, &mut x);
                visit(&mut acc, dot(pc, &x));
            }
            acc
        },
    )
}

fn occupancy<S: Sampler + ?Sized>(
    sampler: &S,
    p: &Point,
    epsilon: f64,
    sampling: &Sampling,
) -> Result<OccupancyEstimate> {
    check_point(sampler, p)?;
    check_epsilon(epsilon)?;
    sampling.check()?;
    let eps_bar = epsilon.sin();
    let hits: u64 = for_each_cosine(sampler, p, sampling, 0u64, |hits, c| {
        if c.abs() < eps_bar {
            *hits += 1;
        }
    })
    .into_iter()
    .sum();
    Ok(OccupancyEstimate::from_counts(hits, sampling))
}

/// Fraction of induced-volume samples `x` with `|⟨p, x⟩| < sin ε`.
pub fn estimate_strip_occupancy(
    instance: &MinimalInstance,
    p: &Point,
    epsilon: f64,
    sampling: &Sampling,
) -> Result<OccupancyEstimate> {
    instance.validate()?;
    occupancy(instance, p, epsilon, sampling)
}

/// Occupancy of `Ω(p, ε)` on the uniform sphere `S^n`.
pub fn estimate_sphere_occupancy(
    n: usize,
    p: &Point,
    epsilon: f64,
    sampling: &Sampling,
) -> Result<OccupancyEstimate> {
    occupancy(&UniformSphere { n }, p, epsilon, sampling)
}

/// Fraction of total-space samples whose projection lies in `Ω(p, ε)`; the
/// fiber coordinate plays no role, as `r_p = d_p ∘ π`.
pub fn estimate_submersion_occupancy(
    sub: &ProductSubmersion,
    p: &Point,
    epsilon: f64,
    sampling: &Sampling,
) -> Result<OccupancyEstimate> {
    occupancy(sub, p, epsilon, sampling)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPieceKind {
    ContainedInEquator,
    Crosses,
    /// Samples off the equator were all on one side.
    Indeterminate,
}

impl std::fmt::Display for TwoPieceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TwoPieceKind::ContainedInEquator => "ContainedInEquator",
            TwoPieceKind::Crosses => "Crosses",
            TwoPieceKind::Indeterminate => "Indeterminate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPieceVerdict {
    pub kind: TwoPieceKind,
    /// Samples with `cos r_p > tol`.
    pub positive: u64,
    /// Samples with `cos r_p < −tol`.
    pub negative: u64,
    /// Samples with `|cos r_p| ≤ tol`.
    pub equatorial: u64,
}

impl TwoPieceVerdict {
    pub fn total(&self) -> u64 {
        self.positive + self.negative + self.equatorial
    }
}

pub const DEFAULT_TWO_PIECE_TOLERANCE: f64 = 1e-9;

/// Classifies the position of `x(Σ)` relative to the equator `E(p)`.
pub fn two_piece_classify(
    instance: &MinimalInstance,
    p: &Point,
    tol: f64,
    sampling: &Sampling,
) -> Result<TwoPieceVerdict> {
    instance.validate()?;
    check_point(instance, p)?;
    sampling.check()?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let counts = for_each_cosine(instance, p, sampling, [0u64; 3], |acc, c| {
        if c > tol {
            acc[0] += 1;
        } else if c < -tol {
            acc[1] += 1;
        } else {
            acc[2] += 1;
        }
    })
    .into_iter()
    .fold([0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let [positive, negative, equatorial] = counts;
    let kind = if positive == 0 && negative == 0 {
        TwoPieceKind::ContainedInEquator
    } else if positive > 0 && negative > 0 {
        TwoPieceKind::Crosses
    } else {
        TwoPieceKind::Indeterminate
    };
    Ok(TwoPieceVerdict {
        kind,
        positive,
        negative,
        equatorial,
    })
}

/// Empirical `(1/vol Σ) ∫_Σ cos^{2k} r_p` with standard errors, `k = 0..=K`.
pub fn estimate_moments(
    instance: &MinimalInstance,
    p: &Point,
    max_k: usize,
    sampling: &Sampling,
) -> Result<Vec<(f64, f64)>> {
    instance.validate()?;
    check_point(instance, p)?;
    sampling.check()?;
    if max_k == 0 {
        return Err(Error::domain("K", 0, "K >= 1"));
    }
    let zero = vec![(0.0f64, 0.0f64); max_k + 1];
    let sums = for_each_cosine(instance, p, sampling, zero, |acc, c| {
        let c2 = c * c;
        let mut power = 1.0;
        for slot in acc.iter_mut() {
            slot.0 += power;
            slot.1 += power * power;
            power *= c2;
        }
    })
    .into_iter()
    .fold(vec![(0.0, 0.0); max_k + 1], |mut total, chunk| {
        total.iter_mut().zip(chunk).for_each(|(t, c)| {
            t.0 += c.0;
            t.1 += c.1;
        });
        total
    });

    let n = sampling.samples as f64;
    Ok(sums
        .into_iter()
        .enumerate()
        .map(|(k, (s, s2))| {
            if k == 0 {
                return (1.0, 0.0);
            }
            let mean = s / n;
            let var = (s2 / n - mean * mean).max(0.0);
            (mean, (var / n).sqrt())
        })
        .collect())
}

/// Closed-form `vol(x⁻¹(Ω(p, ε))) / vol(Σ)` where one is available.
///
/// For a great subsphere `⟨p, x⟩ = ρ ⟨u, y⟩` with `y` uniform on `S^m` and
/// `ρ` the length of the projection of `p` onto the span. For a torus with
/// `p` inside a single factor block, `⟨p, x⟩ = r_i ⟨u, y_i⟩` with `y_i`
/// uniform on `S^{m_i}`. Other positions of `p` on a torus return `None`.
pub fn closed_form_occupancy(
    instance: &MinimalInstance,
    p: &Point,
    epsilon: f64,
) -> Result<Option<f64>> {
    check_point(instance, p)?;
    check_epsilon(epsilon)?;
    let eps_bar = epsilon.sin();
    Ok(match reduce_to_sphere(instance, p) {
        None => None,
        Some((_, 0.0)) => Some(1.0),
        Some((dim, scale)) => Some(strip_fraction_from_sine(dim, eps_bar / scale)?),
    })
}

/// Closed-form `(1/vol Σ) ∫_Σ cos^{2k} r_p` under the same reductions as
/// [`closed_form_occupancy`]: `scale^{2k} · M_k(dim)`.
pub fn closed_form_moment(instance: &MinimalInstance, p: &Point, k: usize) -> Result<Option<f64>> {
    check_point(instance, p)?;
    Ok(match reduce_to_sphere(instance, p) {
        None => None,
        Some((dim, scale)) => Some(scale.powi(2 * k as i32) * cos_moment::<f64>(dim, k)?),
    })
}

/// Returns `(dim, scale)` such that `⟨p, x⟩` has the law of `scale · y₀`
/// for `y` uniform on `S^dim`.
fn reduce_to_sphere(instance: &MinimalInstance, p: &Point) -> Option<(usize, f64)> {
    match instance {
        MinimalInstance::Subsphere(s) => Some(subsphere_reduction(s, p)),
        MinimalInstance::Torus(t) => torus_reduction(t, p),
    }
}

fn subsphere_reduction(s: &GreatSubsphere, p: &Point) -> (usize, f64) {
    let rho = norm(&s.coefficients(p.coords())).min(1.0);
    (s.intrinsic_dim(), rho)
}

fn torus_reduction(t: &CliffordTorus, p: &Point) -> Option<(usize, f64)> {
    let x = p.coords();
    let mut found = None;
    for (f, start) in t.factors().iter().zip(t.block_offsets()) {
        let block = norm(&x[start..start + f.dim + 1]);
        if block > 0.0 {
            if found.is_some() {
                return None;
            }
            found = Some((f.dim, f.radius));
        }
    }
    found
}

/// One bound row of an [`ExtrinsicReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub delta: Option<f64>,
    pub value: f64,
    /// `estimate + 4·stderr − max(0, value)`.
    pub margin: f64,
    pub pass: bool,
}

/// An occupancy estimate next to the Main I and Main II bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrinsicReport {
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub epsilon: f64,
    pub estimate: OccupancyEstimate,
    pub closed_form: Option<f64>,
    pub checks: Vec<BoundCheck>,
}

impl ExtrinsicReport {
    /// False means a bound was beaten by more than 4 standard errors, which
    /// for a valid minimal instance indicates a bug.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
            && self
                .closed_form
                .is_none_or(|v| self.estimate.consistent_with(v))
    }
}

pub fn extrinsic_concentration_report(
    instance: &MinimalInstance,
    p: &Point,
    epsilon: f64,
    sampling: &Sampling,
    delta_grid: &[f64],
) -> Result<ExtrinsicReport> {
    let estimate = estimate_strip_occupancy(instance, p, epsilon, sampling)?;
    let m = instance.intrinsic_dim();
    let check = |name, delta, value: f64| {
        let margin = estimate.fraction + CONFIDENCE_SIGMAS * estimate.stderr - value.max(0.0);
        BoundCheck {
            name,
            delta,
            value,
            margin,
            pass: margin >= 0.0,
        }
    };
    let mut checks = vec![check("main1", None, main1_bound(m, epsilon)?)];
    for &d in delta_grid {
        checks.push(check("main2", Some(d), main2_bound(m, epsilon, d)?));
    }
    let best = main2_best_delta(m, epsilon)?;
    checks.push(check(
        "main2_best",
        Some(best),
        main2_bound(m, epsilon, best)?,
    ));
    Ok(ExtrinsicReport {
        intrinsic_dim: m,
        ambient_dim: instance.ambient_dim(),
        epsilon,
        estimate,
        closed_form: closed_form_occupancy(instance, p, epsilon)?,
        checks,
    })
}

/// Mean of `⟨p, q⟩` over uniform `q ∈ S^n`, with its standard error.
pub fn mean_cosine(n: usize, p: &Point, sampling: &Sampling) -> Result<(f64, f64)> {
    let sphere = UniformSphere { n };
    check_point(&sphere, p)?;
    sampling.check()?;
    let (s, s2) = for_each_cosine(&sphere, p, sampling, (0.0, 0.0), |acc, c| {
        acc.0 += c;
        acc.1 += c * c;
    })
    .into_iter()
    .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let count = sampling.samples as f64;
    let mean = s / count;
    Ok((mean, ((s2 / count - mean * mean).max(0.0) / count).sqrt()))
}

/// Counts pairs `(q, s)` of uniform points on `S^n` that violate
/// `|⟨p, q⟩ − ⟨p, s⟩| ≤ d(q, s) + slack`.
pub fn lipschitz_violations(
    n: usize,
    p: &Point,
    pairs: usize,
    stream: SeedStream,
    slack: f64,
) -> Result<usize> {
    let sphere = UniformSphere { n };
    check_point(&sphere, p)?;
    let pc = p.coords();
    let len = n + 1;
    Ok(map_chunks(pairs, stream, 1, |rng, count| {
        let mut q = vec![0.0; len];
        let mut s = vec![0.0; len];
        let mut bad = 0usize;
        for _ in 0..count {
            sphere.sample_into(rng, &mut q);
            sphere.sample_into(rng, &mut s);
            let d = dot(&q, &s).clamp(-1.0, 1.0).acos();
            if (dot(pc, &q) - dot(pc, &s)).abs() > d + slack {
                bad += 1;
            }
        }
        bad
    })
    .into_iter()
    .sum())
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS statistic at level
/// `alpha`: `√(−ln(α/2)/2) · √((n_a + n_b)/(n_a n_b))`.
pub fn ks_critical_value(alpha: f64, na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    (-(alpha / 2.0).ln() / 2.0).sqrt() * ((na + nb) / (na * nb)).sqrt()
}
