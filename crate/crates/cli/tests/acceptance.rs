//! Acceptance criteria: prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fateq_core::bounds::{equator_bound, main1_bound, main2_best_delta, main2_bound};
use fateq_core::manifolds::{
    sample_sphere, CliffordTorus, GreatSubsphere, MinimalInstance, ProductSubmersion,
};
use fateq_core::moments::{cos_mgf, cos_moment};
use fateq_core::montecarlo::{
    closed_form_occupancy, estimate_strip_occupancy, estimate_submersion_occupancy,
    lipschitz_violations, mean_cosine, two_piece_classify, Sampling, TwoPieceKind,
};
use fateq_core::rng::{default_workers, SeedStream};
use fateq_core::special::{integrate, QuadratureSpec};
use fateq_core::sphere::{strip_complement, strip_fraction, SpherePoint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0x5eed_2024;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn epsilon_grid() -> Vec<f64> {
    (1..=15).map(|i| i as f64 / 10.0).collect()
}

fn sampling(stream: SeedStream, n: usize) -> Sampling {
    Sampling::new(n, stream).with_workers(default_workers())
}

/// ∫_{π/2−ε}^{π/2+ε} sin^{n−1} / ∫_0^π sin^{n−1} by adaptive quadrature.
fn quadrature_strip(n: usize, eps: f64) -> f64 {
    let spec = QuadratureSpec::default();
    let w = |t: f64| t.sin().powi(n as i32 - 1);
    integrate(w, FRAC_PI_2 - eps, FRAC_PI_2 + eps, &spec).unwrap()
        / integrate(w, 0.0, PI, &spec).unwrap()
}

fn c1_exact_geometry() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=100 {
        for eps in epsilon_grid() {
            worst = worst.max((strip_fraction(n, eps).unwrap() - quadrature_strip(n, eps)).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(
        worst <= 1e-9 && elapsed < Duration::from_secs(5),
        format!(
            "max |strip - quadrature| = {worst:.2e} (<= 1e-9), {:.2} s (< 5 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_archimedes() -> Outcome {
    let a = (strip_fraction(2, FRAC_PI_6).unwrap() - 0.5).abs();
    let b = (strip_fraction(1, FRAC_PI_4).unwrap() - 0.5).abs();
    ensure(
        a <= 1e-12 && b <= 1e-12,
        format!("|S2(pi/6) - 1/2| = {a:.1e}, |S1(pi/4) - 1/2| = {b:.1e}"),
    )
}

fn c3_equator_dominance() -> Outcome {
    let mut violations = 0;
    for n in 1..=100 {
        for eps in epsilon_grid() {
            let bound =
                (1.0 - (PI / 2.0).sqrt() * (-eps * eps * (n as f64 - 1.0) / 2.0).exp()).max(0.0);
            let lib = equator_bound(n, eps).unwrap().max(0.0);
            if strip_fraction(n, eps).unwrap() < bound || (lib - bound).abs() > 1e-15 {
                violations += 1;
            }
        }
    }
    ensure(
        violations == 0,
        format!("{violations} violations on 1500 grid points"),
    )
}

/// First dimension with `strip_fraction(n, 0.3) > 0.99`, from a 40-digit
/// evaluation of the incomplete beta function.
const FAT_EQUATOR_N_STAR: usize = 74;

fn c4_fat_equator() -> Outcome {
    let values: Vec<f64> = (1..=1000)
        .map(|n| strip_fraction(n, 0.3).unwrap())
        .collect();
    // Past n ≈ 700 the fraction is within an ulp of 1, so strictness is
    // read off the complement there.
    let complement: Vec<f64> = (1..=1000)
        .map(|n| strip_complement(n, 0.3).unwrap())
        .collect();
    let increasing =
        values[..500].windows(2).all(|w| w[1] > w[0]) && complement.windows(2).all(|w| w[1] < w[0]);
    let n_star = values.iter().position(|&v| v > 0.99).map(|i| i + 1);
    let all_above = values[FAT_EQUATOR_N_STAR - 1..].iter().all(|&v| v > 0.99);
    ensure(
        increasing && n_star == Some(FAT_EQUATOR_N_STAR) && all_above && FAT_EQUATOR_N_STAR <= 110,
        format!("strictly increasing for n <= 1000: {increasing}; N* = {n_star:?} (golden {FAT_EQUATOR_N_STAR})"),
    )
}

fn c5_moments() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut first = 0.0f64;
    for m in 1..=50 {
        let w = |t: f64| t.sin().powi(m as i32 - 1);
        let den = integrate(w, 0.0, PI, &spec).unwrap();
        for k in 0..=20 {
            let num = integrate(|t: f64| t.cos().powi(2 * k) * w(t), 0.0, PI, &spec).unwrap();
            worst = worst.max((cos_moment::<f64>(m, k as usize).unwrap() - num / den).abs());
        }
        first = first.max((cos_moment::<f64>(m, 1).unwrap() - 1.0 / (m as f64 + 1.0)).abs());
    }
    ensure(
        worst <= 1e-10 && first <= 1e-14,
        format!("max error vs quadrature {worst:.2e} (<= 1e-10); max |M_1 - 1/(m+1)| {first:.1e} (<= 1e-14)"),
    )
}

fn c6_mgf_bound() -> Outcome {
    let mut violations = 0;
    for m in 1..=30 {
        let cap = (m as f64 + 1.0) / 2.0;
        for j in 1..=20 {
            let t = cap * j as f64 / 21.0;
            let bound = ((m as f64 + 1.0) / (m as f64 + 1.0 - 2.0 * t)).sqrt();
            if cos_mgf(m, t, 1e-16).unwrap() > bound {
                violations += 1;
            }
        }
    }
    ensure(
        violations == 0,
        format!("{violations} violations on 30 x 20 (m, t) points"),
    )
}

fn c7_delta0() -> Outcome {
    let d0 = 15.0 / 32.0;
    let mut worst = 0.0f64;
    for m in 1..=100 {
        for eps in epsilon_grid() {
            let s = eps.sin().powi(2) * (m as f64 + 1.0);
            worst =
                worst.max((main2_bound(m, eps, d0).unwrap() - (1.0 - 4.0 * (-d0 * s).exp())).abs());
        }
    }
    ensure(
        worst <= 1e-12,
        format!("max |main2(15/32) - (1 - 4 exp(-15/32 s))| = {worst:.1e}"),
    )
}

fn c8_clifford_torus() -> Outcome {
    let start = Instant::now();
    let torus: MinimalInstance = CliffordTorus::new(&[1, 1]).unwrap().into();
    let stream = SeedStream::new(SEED, 8);
    let mut rng = stream.child(0).chunk_rng(0);
    let random_ps = sample_sphere(3, 10, stream.child(1)).unwrap();
    let mut failures = Vec::new();
    let mut closed_checked = 0;
    for j in 0..20 {
        let eps = 0.02 + (FRAC_PI_2 - 0.04) * rng.uniform();
        let p = if j < 10 {
            SpherePoint::axis(3, (rng.next_u64() % 4) as usize).unwrap()
        } else {
            random_ps[j - 10].clone()
        };
        let est = estimate_strip_occupancy(
            &torus,
            &p,
            eps,
            &sampling(stream.child(10 + j as u64), 1_000_000),
        )
        .unwrap();
        if j < 10 {
            // p on an axis lies in one factor of radius 1/√2.
            let closed = closed_form_occupancy(&torus, &p, eps).unwrap();
            let independent = if eps.sin() * 2f64.sqrt() >= 1.0 {
                1.0
            } else {
                2.0 / PI * (eps.sin() * 2f64.sqrt()).asin()
            };
            closed_checked += 1;
            if closed.is_none_or(|c| (c - independent).abs() > 1e-12)
                || !est.consistent_with(independent)
            {
                failures.push(format!("trial {j}: closed form"));
            }
        }
        let best = main2_best_delta(2, eps).unwrap();
        if !est.dominates(main1_bound(2, eps).unwrap())
            || !est.dominates(main2_bound(2, eps, best).unwrap())
        {
            failures.push(format!("trial {j}: bound"));
        }
    }
    let elapsed = start.elapsed();
    ensure(
        failures.is_empty() && elapsed < Duration::from_secs(20),
        format!(
            "20 trials at N = 1e6 ({closed_checked} closed-form), failures {failures:?}, {:.2} s (< 20 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn c9_subsphere() -> Outcome {
    let stream = SeedStream::new(SEED, 9);
    let sub = GreatSubsphere::random(3, 9, stream.child(0)).unwrap();
    let u = sample_sphere(3, 1, stream.child(1)).unwrap().remove(0);
    let p = SpherePoint::normalized(sub.embed(u.coords()).unwrap()).unwrap();
    let inst: MinimalInstance = sub.into();
    let mut details = Vec::new();
    let mut ok = true;
    for (i, eps) in [0.3, 0.6, 0.9].into_iter().enumerate() {
        let est = estimate_strip_occupancy(
            &inst,
            &p,
            eps,
            &sampling(stream.child(10 + i as u64), 100_000),
        )
        .unwrap();
        let z = (est.fraction - strip_fraction(3, eps).unwrap()).abs() / est.stderr;
        ok &= z <= 4.0;
        details.push(format!("eps {eps}: {z:.2} stderr"));
    }
    ensure(ok, details.join(", "))
}

fn c10_submersion() -> Outcome {
    let stream = SeedStream::new(SEED, 10);
    let p = sample_sphere(4, 1, stream.child(0)).unwrap().remove(0);
    let mut ok = true;
    let mut details = Vec::new();
    for (i, eps) in [0.3, 0.6, 0.9].into_iter().enumerate() {
        let s = sampling(stream.child(10 + i as u64), 100_000);
        let ests: Vec<f64> = [0.1, 1.0, 10.0]
            .into_iter()
            .map(|d| {
                estimate_submersion_occupancy(&ProductSubmersion::new(4, d).unwrap(), &p, eps, &s)
                    .unwrap()
            })
            .map(|e| {
                ok &= e.consistent_with(strip_fraction(4, eps).unwrap());
                e.fraction
            })
            .collect();
        let identical = ests.iter().all(|e| e.to_bits() == ests[0].to_bits());
        ok &= identical;
        details.push(format!("eps {eps}: bit-identical across delta {identical}"));
    }
    ensure(ok, details.join(", "))
}

fn c11_two_piece() -> Outcome {
    let stream = SeedStream::new(SEED, 11);
    let torus: MinimalInstance = CliffordTorus::new(&[1, 1]).unwrap().into();
    let crosses = sample_sphere(3, 100, stream.child(0))
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(j, p)| {
            two_piece_classify(
                &torus,
                p,
                1e-9,
                &sampling(stream.child(10 + *j as u64), 10_000),
            )
            .unwrap()
            .kind
                == TwoPieceKind::Crosses
        })
        .count();
    let sub: MinimalInstance = GreatSubsphere::coordinate(3, 6).unwrap().into();
    let q = SpherePoint::axis(6, 6).unwrap();
    let kind = two_piece_classify(&sub, &q, 1e-9, &sampling(stream.child(1), 10_000))
        .unwrap()
        .kind;
    ensure(
        crosses == 100 && kind == TwoPieceKind::ContainedInEquator,
        format!("{crosses}/100 Crosses on the torus; orthogonal p on S^3 in S^6: {kind}"),
    )
}

fn c12_lipschitz_zero_mean() -> Outcome {
    let stream = SeedStream::new(SEED, 12);
    let mut ok = true;
    let mut details = Vec::new();
    for (i, n) in [2usize, 10, 50].into_iter().enumerate() {
        let p = sample_sphere(n, 1, stream.child(100 + i as u64))
            .unwrap()
            .remove(0);
        let bad =
            lipschitz_violations(n, &p, 100_000, stream.child(200 + i as u64), 1e-12).unwrap();
        let (mean, _) = mean_cosine(n, &p, &sampling(stream.child(i as u64), 1_000_000)).unwrap();
        let tol = 4.0 * (1.0 / (n as f64 + 1.0)).sqrt() / 1e3;
        ok &= bad == 0 && mean.abs() <= tol;
        details.push(format!(
            "n {n}: {bad} Lipschitz violations, |mean| {:.2e} <= {tol:.2e}",
            mean.abs()
        ));
    }
    ensure(ok, details.join("; "))
}

fn c13_reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut artifacts = Vec::new();
    let mut times = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("verify_{workers}.csv"));
        let start = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_fateq"))
            .args([
                "verify",
                "full",
                "--seed",
                "2024",
                "--workers",
                workers,
                "--out",
            ])
            .arg(&out)
            .output()
            .unwrap()
            .status;
        times.push(start.elapsed());
        if !status.success() {
            return Err(format!(
                "verify full with {workers} worker(s) exited with {status}"
            ));
        }
        artifacts.push(std::fs::read(&out).unwrap());
    }
    let identical = artifacts[0] == artifacts[1] && !artifacts[0].is_empty();
    let slowest = times.iter().max().unwrap().as_secs_f64();
    ensure(
        identical && slowest < 120.0,
        format!("two full runs (1 and 8 workers) byte-identical: {identical}; slowest {slowest:.1} s (< 120 s)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("exact-geometry oracle", c1_exact_geometry),
        ("archimedes", c2_archimedes),
        ("equator bound dominance", c3_equator_dominance),
        ("fat-equator limit", c4_fat_equator),
        ("moment recurrence", c5_moments),
        ("mgf bound", c6_mgf_bound),
        ("delta0 calibration", c7_delta0),
        ("clifford-torus concentration", c8_clifford_torus),
        ("great-subsphere reduction", c9_subsphere),
        ("submersion equality", c10_submersion),
        ("two-piece", c11_two_piece),
        ("lipschitz and zero mean", c12_lipschitz_zero_mean),
        ("reproducibility", c13_reproducibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
