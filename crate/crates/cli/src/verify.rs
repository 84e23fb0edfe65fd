//! The `verify` suite: every invariant of the library as a named PASS/FAIL
//! check with a deterministic CSV summary.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use fateq_core::bounds::{bound_report, equator_bound, main1_bound, main2_best_delta, main2_bound};
use fateq_core::manifolds::{
    sample_sphere, CliffordTorus, GreatSubsphere, MinimalInstance, ProductSubmersion, Sampler,
    TorusFactor,
};
use fateq_core::moments::{
    cos_mgf, cos_moment, main2_via_moment_chain, mgf_bound, moment_domination_check,
};
use fateq_core::montecarlo::{
    closed_form_occupancy, estimate_moments, estimate_strip_occupancy,
    estimate_submersion_occupancy, ks_critical_value, ks_statistic, lipschitz_violations,
    mean_cosine, two_piece_classify, Sampling, TwoPieceKind, CONFIDENCE_SIGMAS,
};
use fateq_core::rng::{map_chunks, SeedStream};
use fateq_core::special::{integrate, reg_inc_beta, QuadratureSpec};
use fateq_core::sphere::{cap_fraction, strip_complement, strip_fraction, SpherePoint};
use fateq_core::{Params, Point};

use crate::csv::CsvRow;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    /// Monte Carlo sample count for the statistical checks.
    pub fn samples(self) -> usize {
        match self {
            Level::Quick => 10_000,
            Level::Full => 1_000_000,
        }
    }
}

impl std::str::FromStr for Level {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(CliError::Usage(format!(
                "unknown level '{s}'; expected quick or full"
            ))),
        }
    }
}

/// Seeded faults for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Replace the radii of the `S¹ × S¹` fixture by (0.6, 0.8).
    TorusRadius,
}

impl std::str::FromStr for Fault {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "torus-radius" => Ok(Fault::TorusRadius),
            _ => Err(CliError::Usage(format!(
                "unknown fault '{s}'; expected torus-radius"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub level: Level,
    pub seed: u64,
    pub workers: usize,
    pub fault: Option<Fault>,
}

impl VerifyOptions {
    pub fn new(level: Level, seed: u64) -> Self {
        Self {
            level,
            seed,
            workers: 1,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub rows: Vec<CsvRow>,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn rows(&self) -> Vec<CsvRow> {
        self.checks
            .iter()
            .flat_map(|c| c.rows.iter().cloned())
            .collect()
    }
}

/// Exact first dimension with `strip_fraction(n, 0.3) > 0.99`.
pub const FAT_EQUATOR_THRESHOLD_DIM: usize = 74;

struct Ctx {
    opts: VerifyOptions,
}

impl Ctx {
    fn stream(&self, index: u64) -> SeedStream {
        SeedStream::new(self.opts.seed, 1000 + index)
    }

    fn sampling(&self, stream: SeedStream, samples: usize) -> Sampling {
        Sampling::new(samples, stream).with_workers(self.opts.workers)
    }

    fn row(&self, name: &str, statistic: f64, margin: f64, samples: Option<usize>) -> CsvRow {
        CsvRow {
            bound_name: Some(name.to_string()),
            bound_value: Some(statistic),
            slack: Some(margin),
            samples,
            seed: samples.map(|_| self.opts.seed),
            ..CsvRow::new("verify")
        }
    }
}

type Check = fn(&Ctx) -> Result<CheckOutcome, CliError>;

/// Summary outcome for "`statistic` must not exceed `tol`".
fn within(ctx: &Ctx, name: &'static str, statistic: f64, tol: f64, what: &str) -> CheckOutcome {
    CheckOutcome {
        name,
        pass: statistic <= tol,
        detail: format!("{what} = {statistic:.3e} (tolerance {tol:.0e})"),
        rows: vec![ctx.row(name, statistic, tol - statistic, None)],
    }
}

fn counted(
    ctx: &Ctx,
    name: &'static str,
    bad: usize,
    total: usize,
    what: &str,
    samples: Option<usize>,
) -> CheckOutcome {
    CheckOutcome {
        name,
        pass: bad == 0,
        detail: format!("{bad} of {total} {what}"),
        rows: vec![ctx.row(name, bad as f64, -(bad as f64), samples)],
    }
}

fn epsilon_grid() -> impl Iterator<Item = f64> {
    (1..=15).map(|i| i as f64 / 10.0)
}

fn quadrature_strip(n: usize, eps: f64) -> Result<f64, CliError> {
    let spec = QuadratureSpec::default();
    let w = |t: f64| t.sin().powi(n as i32 - 1);
    let num = integrate(w, FRAC_PI_2 - eps, FRAC_PI_2 + eps, &spec)?;
    let den = integrate(w, 0.0, PI, &spec)?;
    Ok(num / den)
}

fn quadrature_weighted(m: usize, f: impl Fn(f64) -> f64) -> Result<f64, CliError> {
    let spec = QuadratureSpec::default();
    let w = |t: f64| t.sin().powi(m as i32 - 1);
    let num = integrate(|t: f64| f(t) * w(t), 0.0, PI, &spec)?;
    let den = integrate(w, 0.0, PI, &spec)?;
    Ok(num / den)
}

fn incomplete_beta_reflection(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut rng = ctx.stream(0).chunk_rng(0);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x = rng.uniform();
        let a = 1e-3 + 100.0 * rng.uniform();
        let b = 1e-3 + 100.0 * rng.uniform();
        let e = (reg_inc_beta(x, a, b)? + reg_inc_beta(1.0 - x, b, a)? - 1.0).abs();
        worst = worst.max(e);
    }
    Ok(within(
        ctx,
        "incomplete_beta_reflection",
        worst,
        1e-12,
        "max |I_x(a,b) + I_{1-x}(b,a) - 1| over 10000 draws",
    ))
}

fn strip_vs_quadrature(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    for n in 1..=100 {
        for eps in epsilon_grid() {
            worst = worst.max((strip_fraction(n, eps)? - quadrature_strip(n, eps)?).abs());
        }
    }
    Ok(within(
        ctx,
        "strip_vs_quadrature",
        worst,
        1e-9,
        "max error, n <= 100, eps = 0.1..1.5",
    ))
}

fn archimedes(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let e = (strip_fraction(2, FRAC_PI_6)? - 0.5)
        .abs()
        .max((strip_fraction(1, FRAC_PI_4)? - 0.5).abs());
    Ok(within(
        ctx,
        "archimedes",
        e,
        1e-12,
        "max |fraction - 1/2| at (2, pi/6), (1, pi/4)",
    ))
}

fn cap_complement(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    for n in 1..=200 {
        for i in 0..=32 {
            let r = PI * i as f64 / 32.0;
            worst = worst.max((cap_fraction(n, r)? + cap_fraction(n, PI - r)? - 1.0).abs());
        }
    }
    Ok(within(
        ctx,
        "cap_complement",
        worst,
        1e-12,
        "max |cap(r) + cap(pi - r) - 1|",
    ))
}

fn strip_monotone(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut bad = 0;
    let mut total = 0;
    for eps in epsilon_grid() {
        let mut prev: Option<(f64, f64)> = None;
        for n in 1..=200 {
            let cur = (strip_fraction(n, eps)?, strip_complement(n, eps)?);
            if let Some((f, c)) = prev {
                total += 1;
                if cur.0 < f || cur.1 >= c {
                    bad += 1;
                }
            }
            prev = Some(cur);
        }
    }
    Ok(counted(
        ctx,
        "strip_monotone",
        bad,
        total,
        "steps in n not increasing",
        None,
    ))
}

fn equator_dominance(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut bad = 0;
    for n in 1..=100 {
        for eps in epsilon_grid() {
            if strip_fraction(n, eps)? < equator_bound(n, eps)?.max(0.0) {
                bad += 1;
            }
        }
    }
    Ok(counted(
        ctx,
        "equator_dominance",
        bad,
        1500,
        "grid points violated",
        None,
    ))
}

fn bound_dominance(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut bad = 0;
    let mut total = 0;
    let mut min_slack = f64::INFINITY;
    for &delta in &[0.0, 0.1, 0.2, 0.3, 0.4, 0.49] {
        let params = Params::new(delta)?;
        for n in 1..=200 {
            for i in 1..=30 {
                let eps = 0.05 * i as f64;
                let report = bound_report(n, eps, &params)?;
                total += 1;
                bad += report.violations(1e-12).len();
                min_slack = min_slack.min(report.min_guaranteed_slack());
            }
        }
    }
    let mut out = counted(
        ctx,
        "bound_dominance",
        bad,
        total,
        "reports with a violated bound",
        None,
    );
    out.detail.push_str(&format!(", min slack {min_slack:.3e}"));
    out.rows[0].slack = Some(min_slack);
    Ok(out)
}

fn fat_equator_limit(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let values: Vec<f64> = (1..=500)
        .map(|n| strip_fraction(n, 0.3))
        .collect::<Result<_, _>>()?;
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let first = values.iter().position(|&v| v > 0.99).map(|i| i + 1);
    let pass = increasing && first == Some(FAT_EQUATOR_THRESHOLD_DIM);
    Ok(CheckOutcome {
        name: "fat_equator_limit",
        pass,
        detail: format!(
            "eps = 0.3: strictly increasing for n <= 500: {increasing}; first n above 0.99: {first:?} (expected {FAT_EQUATOR_THRESHOLD_DIM})"
        ),
        rows: vec![CsvRow {
            n: first,
            epsilon: Some(0.3),
            exact_fraction: first.map(|n| values[n - 1]),
            ..ctx.row("fat_equator_limit", first.unwrap_or(0) as f64, 0.0, None)
        }],
    })
}

fn moment_recurrence(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    let mut first = 0.0f64;
    for m in 1..=50 {
        for k in 0..=20 {
            let q = quadrature_weighted(m, |t| t.cos().powi(2 * k as i32))?;
            worst = worst.max((cos_moment::<f64>(m, k)? - q).abs());
        }
        first = first.max((cos_moment::<f64>(m, 1)? - 1.0 / (m as f64 + 1.0)).abs());
    }
    let pass = worst <= 1e-10 && first <= 1e-14;
    Ok(CheckOutcome {
        name: "moment_recurrence",
        pass,
        detail: format!("max error vs quadrature {worst:.3e} (tolerance 1e-10); max |M_1 - 1/(m+1)| {first:.3e} (tolerance 1e-14)"),
        rows: vec![ctx.row("moment_recurrence", worst, 1e-10 - worst, None)],
    })
}

fn mgf_t_grid(m: usize) -> impl Iterator<Item = f64> {
    let cap = (m as f64 + 1.0) / 2.0;
    (1..=20).map(move |j| cap * j as f64 / 21.0)
}

fn mgf_bound_check(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut bad = 0;
    for m in 1..=30 {
        for t in mgf_t_grid(m) {
            if cos_mgf(m, t, 1e-16)? > mgf_bound(m, t)? {
                bad += 1;
            }
        }
    }
    Ok(counted(
        ctx,
        "mgf_bound",
        bad,
        600,
        "(m, t) grid points violated",
        None,
    ))
}

fn mgf_vs_quadrature(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    for m in [1, 2, 5, 10, 30] {
        for t in mgf_t_grid(m).step_by(4) {
            let q = quadrature_weighted(m, |x| (t * x.cos().powi(2)).exp())?;
            worst = worst.max(((cos_mgf(m, t, 1e-16)? - q) / q).abs());
        }
    }
    Ok(within(
        ctx,
        "mgf_vs_quadrature",
        worst,
        1e-9,
        "max relative error of the series",
    ))
}

fn delta0_calibration(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let d0 = 15.0 / 32.0;
    let mut worst = 0.0f64;
    for m in 1..=100 {
        for eps in epsilon_grid() {
            let s = eps.sin().powi(2) * (m as f64 + 1.0);
            worst = worst.max((main2_bound(m, eps, d0)? - (1.0 - 4.0 * (-d0 * s).exp())).abs());
        }
    }
    Ok(within(
        ctx,
        "delta0_calibration",
        worst,
        1e-12,
        "max |main2(15/32) - (1 - 4 exp(-15/32 s))|",
    ))
}

fn best_delta(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    for m in [1, 2, 5, 20, 100, 1000] {
        for eps in epsilon_grid() {
            let best = main2_bound(m, eps, main2_best_delta(m, eps)?)?;
            for j in 0..500 {
                let d = 0.5 * j as f64 / 500.0;
                worst = worst.max(main2_bound(m, eps, d)? - best);
            }
        }
    }
    Ok(within(
        ctx,
        "main2_best_delta",
        worst,
        1e-12,
        "max excess of a grid delta over the optimum",
    ))
}

fn moment_chain(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let mut worst = 0.0f64;
    for m in 1..=60 {
        for eps in epsilon_grid() {
            for d in [0.05, 0.2, 0.35, 0.45] {
                worst =
                    worst.max((main2_via_moment_chain(m, eps, d)? - main2_bound(m, eps, d)?).abs());
            }
        }
    }
    Ok(within(
        ctx,
        "moment_chain",
        worst,
        1e-12,
        "max |chain - closed form|",
    ))
}

fn torus_fixtures(fault: Option<Fault>) -> Result<Vec<CliffordTorus>, CliError> {
    let mut tori = vec![
        CliffordTorus::new(&[1, 1])?,
        CliffordTorus::new(&[2, 1])?,
        CliffordTorus::new(&[3, 3])?,
        CliffordTorus::new(&[1, 2, 4])?,
    ];
    if fault == Some(Fault::TorusRadius) {
        tori[0] = CliffordTorus::with_radii_unchecked(vec![
            TorusFactor {
                dim: 1,
                radius: 0.6,
            },
            TorusFactor {
                dim: 1,
                radius: 0.8,
            },
        ]);
    }
    Ok(tori)
}

fn minimality_certificate(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let tori = torus_fixtures(ctx.opts.fault)?;
    let failing: Vec<String> = tori
        .iter()
        .filter(|t| !t.minimality_certificate().pass)
        .map(|t| {
            format!(
                "{:?}",
                t.factors()
                    .iter()
                    .map(|f| (f.dim, f.radius))
                    .collect::<Vec<_>>()
            )
        })
        .collect();
    let mut out = counted(
        ctx,
        "minimality_certificate",
        failing.len(),
        tori.len(),
        "torus fixtures fail",
        None,
    );
    if !failing.is_empty() {
        out.detail.push_str(&format!(": {}", failing.join(", ")));
    }
    Ok(out)
}

/// `T = S¹(1/√2)²`, 20 draws of `(p, ε)`: the first ten put `p` on a
/// coordinate axis, where the occupancy has a closed form.
fn torus_concentration(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let torus: MinimalInstance = CliffordTorus::new(&[1, 1])?.into();
    let samples = ctx.opts.level.samples();
    let stream = ctx.stream(16);
    let mut rng = stream.child(0).chunk_rng(0);
    let random_ps = sample_sphere(3, 10, stream.child(1))?;
    let mut rows = Vec::new();
    let mut failures = 0;
    for j in 0..20 {
        let eps = 0.02 + (FRAC_PI_2 - 0.04) * rng.uniform();
        let p: Point = if j < 10 {
            SpherePoint::axis(3, (rng.next_u64() % 4) as usize)?
        } else {
            random_ps[j - 10].clone()
        };
        let est = estimate_strip_occupancy(
            &torus,
            &p,
            eps,
            &ctx.sampling(stream.child(10 + j as u64), samples),
        )?;
        let closed = closed_form_occupancy(&torus, &p, eps)?;
        let best = main2_best_delta(2, eps)?;
        let ok = closed.is_none_or(|c| est.consistent_with(c))
            && est.dominates(main1_bound(2, eps)?)
            && est.dominates(main2_bound(2, eps, best)?);
        if !ok || (j < 10 && closed.is_none()) {
            failures += 1;
        }
        rows.push(CsvRow {
            n: Some(3),
            m: Some(2),
            epsilon: Some(eps),
            delta: Some(best),
            exact_fraction: closed,
            estimate: Some(est.fraction),
            stderr: Some(est.stderr),
            bound_name: Some("torus_concentration".into()),
            bound_value: Some(main2_bound(2, eps, best)?.max(main1_bound(2, eps)?)),
            slack: Some(
                est.fraction + CONFIDENCE_SIGMAS * est.stderr
                    - main2_bound(2, eps, best)?
                        .max(main1_bound(2, eps)?)
                        .max(0.0),
            ),
            samples: Some(samples),
            seed: Some(ctx.opts.seed),
            ..CsvRow::new("verify_trial")
        });
    }
    let mut out = counted(
        ctx,
        "torus_concentration",
        failures,
        20,
        "trials failed",
        Some(samples),
    );
    out.rows.extend(rows);
    Ok(out)
}

fn subsphere_reduction(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let stream = ctx.stream(17);
    let sub = GreatSubsphere::random(3, 9, stream.child(0))?;
    let u = sample_sphere(3, 1, stream.child(1))?.remove(0);
    let p = SpherePoint::normalized(sub.embed(u.coords())?)?;
    let inst: MinimalInstance = sub.into();
    let samples = ctx.opts.level.samples();
    let mut bad = 0;
    let mut rows = Vec::new();
    for (i, eps) in [0.3, 0.6, 0.9].into_iter().enumerate() {
        let est = estimate_strip_occupancy(
            &inst,
            &p,
            eps,
            &ctx.sampling(stream.child(10 + i as u64), samples),
        )?;
        let exact = strip_fraction(3, eps)?;
        if !est.consistent_with(exact) {
            bad += 1;
        }
        rows.push(trial_row(
            ctx,
            "subsphere_reduction",
            9,
            3,
            eps,
            exact,
            est.fraction,
            est.stderr,
            samples,
        ));
    }
    let mut out = counted(
        ctx,
        "subsphere_reduction",
        bad,
        3,
        "epsilons outside 4 stderr",
        Some(samples),
    );
    out.rows.extend(rows);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn trial_row(
    ctx: &Ctx,
    name: &str,
    n: usize,
    m: usize,
    eps: f64,
    exact: f64,
    est: f64,
    se: f64,
    samples: usize,
) -> CsvRow {
    CsvRow {
        n: Some(n),
        m: Some(m),
        epsilon: Some(eps),
        exact_fraction: Some(exact),
        estimate: Some(est),
        stderr: Some(se),
        bound_name: Some(name.to_string()),
        slack: Some(CONFIDENCE_SIGMAS * se - (est - exact).abs()),
        samples: Some(samples),
        seed: Some(ctx.opts.seed),
        ..CsvRow::new("verify_trial")
    }
}

fn submersion_equality(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let stream = ctx.stream(18);
    let p = sample_sphere(4, 1, stream.child(0))?.remove(0);
    let samples = ctx.opts.level.samples();
    let mut bad = 0;
    let mut rows = Vec::new();
    for (i, eps) in [0.3, 0.6, 0.9].into_iter().enumerate() {
        let s = ctx.sampling(stream.child(10 + i as u64), samples);
        let exact = strip_fraction(4, eps)?;
        let ests = [0.1, 1.0, 10.0]
            .into_iter()
            .map(|d| estimate_submersion_occupancy(&ProductSubmersion::new(4, d)?, &p, eps, &s))
            .collect::<Result<Vec<_>, _>>()?;
        let identical = ests
            .iter()
            .all(|e| e.fraction.to_bits() == ests[0].fraction.to_bits());
        if !identical || !ests[0].consistent_with(exact) {
            bad += 1;
        }
        rows.push(trial_row(
            ctx,
            "submersion_equality",
            4,
            5,
            eps,
            exact,
            ests[0].fraction,
            ests[0].stderr,
            samples,
        ));
    }
    let mut out = counted(
        ctx,
        "submersion_equality",
        bad,
        3,
        "epsilons failed (delta = 0.1, 1, 10)",
        Some(samples),
    );
    out.rows.extend(rows);
    Ok(out)
}

fn two_piece(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    const SAMPLES: usize = 10_000;
    let stream = ctx.stream(19);
    let torus: MinimalInstance = CliffordTorus::new(&[1, 1])?.into();
    let mut bad = 0;
    for (j, p) in sample_sphere(3, 100, stream.child(0))?.iter().enumerate() {
        let v = two_piece_classify(
            &torus,
            p,
            1e-9,
            &ctx.sampling(stream.child(10 + j as u64), SAMPLES),
        )?;
        if v.kind != TwoPieceKind::Crosses {
            bad += 1;
        }
    }
    let sub: MinimalInstance = GreatSubsphere::coordinate(3, 6)?.into();
    let q = SpherePoint::axis(6, 5)?;
    let v = two_piece_classify(&sub, &q, 1e-9, &ctx.sampling(stream.child(1), SAMPLES))?;
    if v.kind != TwoPieceKind::ContainedInEquator {
        bad += 1;
    }
    let mut out = counted(
        ctx,
        "two_piece",
        bad,
        101,
        "verdicts wrong (100 random p on the torus, 1 orthogonal p on a subsphere)",
        Some(SAMPLES),
    );
    out.pass = bad == 0;
    Ok(out)
}

fn lipschitz(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    const PAIRS: usize = 100_000;
    let stream = ctx.stream(20);
    let mut bad = 0;
    for (i, n) in [2, 10, 50].into_iter().enumerate() {
        let p = SpherePoint::axis(n, 0)?;
        bad += lipschitz_violations(n, &p, PAIRS, stream.child(i as u64), 1e-12)?;
    }
    Ok(counted(
        ctx,
        "lipschitz",
        bad,
        3 * PAIRS,
        "pairs violate |cos r(q) - cos r(s)| <= d(q, s)",
        Some(PAIRS),
    ))
}

fn zero_mean(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let samples = ctx.opts.level.samples();
    let stream = ctx.stream(21);
    let mut bad = 0;
    let mut rows = Vec::new();
    for (i, n) in [2usize, 10, 50].into_iter().enumerate() {
        let p = sample_sphere(n, 1, stream.child(100 + i as u64))?.remove(0);
        let (mean, _) = mean_cosine(n, &p, &ctx.sampling(stream.child(i as u64), samples))?;
        let tol = 4.0 * (1.0 / (n as f64 + 1.0)).sqrt() / (samples as f64).sqrt();
        if mean.abs() > tol {
            bad += 1;
        }
        rows.push(CsvRow {
            n: Some(n),
            estimate: Some(mean),
            bound_name: Some("zero_mean".into()),
            bound_value: Some(tol),
            slack: Some(tol - mean.abs()),
            samples: Some(samples),
            seed: Some(ctx.opts.seed),
            ..CsvRow::new("verify_trial")
        });
    }
    let mut out = counted(
        ctx,
        "zero_mean",
        bad,
        3,
        "dimensions with |mean cos r| above 4 sqrt(1/(n+1)) / sqrt(N)",
        Some(samples),
    );
    out.rows.extend(rows);
    Ok(out)
}

fn moment_domination(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let samples = ctx.opts.level.samples();
    let stream = ctx.stream(22);
    let mut instances: Vec<MinimalInstance> =
        torus_fixtures(None)?.into_iter().map(Into::into).collect();
    instances.push(GreatSubsphere::coordinate(3, 9)?.into());
    instances.push(GreatSubsphere::random(5, 8, stream.child(0))?.into());
    let mut bad = 0;
    let mut total = 0;
    for (i, inst) in instances.iter().enumerate() {
        let p = sample_sphere(inst.ambient_dim(), 1, stream.child(100 + i as u64))?.remove(0);
        let mom = estimate_moments(
            inst,
            &p,
            10,
            &ctx.sampling(stream.child(10 + i as u64), samples),
        )?;
        for v in moment_domination_check(&mom, inst.intrinsic_dim())? {
            total += 1;
            if !v.pass {
                bad += 1;
            }
        }
    }
    Ok(counted(
        ctx,
        "moment_domination",
        bad,
        total,
        "moments above M_k(m) + 4 stderr",
        Some(samples),
    ))
}

/// `⟨p, x⟩` for `x` on `S³ ⊂ S⁹` against `⟨e₀, y⟩` for `y` uniform on `S³`.
fn pushforward_ks(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let samples = ctx.opts.level.samples().min(100_000);
    let stream = ctx.stream(23);
    let sub = GreatSubsphere::random(3, 9, stream.child(0))?;
    let u = sample_sphere(3, 1, stream.child(1))?.remove(0);
    let p = SpherePoint::normalized(sub.embed(u.coords())?)?;
    let cosines = |inst: &dyn Sampler, p: &Point, s: SeedStream| -> Vec<f64> {
        let len = inst.ambient_dim() + 1;
        map_chunks(samples, s, ctx.opts.workers, |rng, count| {
            let mut x = vec![0.0; len];
            (0..count)
                .map(|_| {
                    inst.sample_into(rng, &mut x);
                    x.iter().zip(p.coords()).map(|(a, b)| a * b).sum::<f64>()
                })
                .collect::<Vec<_>>()
        })
        .concat()
    };
    let a = cosines(&sub, &p, stream.child(2));
    let sphere = fateq_core::manifolds::UniformSphere { n: 3 };
    let b = cosines(&sphere, &SpherePoint::axis(3, 0)?, stream.child(3));
    let d = ks_statistic(&a, &b);
    let crit = ks_critical_value(1e-3, samples, samples);
    Ok(CheckOutcome {
        name: "pushforward_ks",
        pass: d <= crit,
        detail: format!(
            "two-sample KS statistic {d:.4e}, critical value {crit:.4e} at alpha = 1e-3"
        ),
        rows: vec![ctx.row("pushforward_ks", d, crit - d, Some(samples))],
    })
}

fn worker_independence(ctx: &Ctx) -> Result<CheckOutcome, CliError> {
    let torus: MinimalInstance = CliffordTorus::new(&[2, 1])?.into();
    let p = SpherePoint::axis(4, 0)?;
    let samples = ctx.opts.level.samples().max(100_000);
    let s = Sampling::new(samples, ctx.stream(24));
    let one = estimate_moments(&torus, &p, 5, &s.with_workers(1))?;
    let eight = estimate_moments(&torus, &p, 5, &s.with_workers(8))?;
    let same = one
        .iter()
        .zip(&eight)
        .all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits());
    Ok(CheckOutcome {
        name: "worker_independence",
        pass: same,
        detail: format!("1-worker and 8-worker moment estimates bit-identical: {same}"),
        rows: vec![ctx.row(
            "worker_independence",
            if same { 0.0 } else { 1.0 },
            0.0,
            Some(samples),
        )],
    })
}

const CHECKS: [(&str, Check); 24] = [
    ("incomplete_beta_reflection", incomplete_beta_reflection),
    ("strip_vs_quadrature", strip_vs_quadrature),
    ("archimedes", archimedes),
    ("cap_complement", cap_complement),
    ("strip_monotone", strip_monotone),
    ("equator_dominance", equator_dominance),
    ("bound_dominance", bound_dominance),
    ("fat_equator_limit", fat_equator_limit),
    ("moment_recurrence", moment_recurrence),
    ("mgf_bound", mgf_bound_check),
    ("mgf_vs_quadrature", mgf_vs_quadrature),
    ("delta0_calibration", delta0_calibration),
    ("main2_best_delta", best_delta),
    ("moment_chain", moment_chain),
    ("minimality_certificate", minimality_certificate),
    ("torus_concentration", torus_concentration),
    ("subsphere_reduction", subsphere_reduction),
    ("submersion_equality", submersion_equality),
    ("two_piece", two_piece),
    ("lipschitz", lipschitz),
    ("zero_mean", zero_mean),
    ("moment_domination", moment_domination),
    ("pushforward_ks", pushforward_ks),
    ("worker_independence", worker_independence),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check in a fixed order. A check that errors counts as a
/// failure; the suite itself never aborts.
pub fn run_verify(opts: VerifyOptions) -> VerifyReport {
    run_checks(opts, |_| {})
}

/// Like [`run_verify`], calling `progress` after each check.
pub fn run_checks(opts: VerifyOptions, mut progress: impl FnMut(&CheckOutcome)) -> VerifyReport {
    let ctx = Ctx { opts };
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| {
            let outcome = check(&ctx).unwrap_or_else(|e| CheckOutcome {
                name,
                pass: false,
                detail: format!("error: {e}"),
                rows: vec![ctx.row(name, f64::NAN, f64::NAN, None)],
            });
            progress(&outcome);
            outcome
        })
        .collect();
    VerifyReport { checks }
}
