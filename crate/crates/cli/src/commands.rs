//! Row builders behind each subcommand. Every function is deterministic in
//! its arguments and the seed; the worker count only changes speed.

use fateq_core::bounds::{
    bound_report, equator_bound, fattening_bound, main1_bound, main2_best_delta, main2_bound,
};
use fateq_core::manifolds::{MinimalInstance, Sampler};
use fateq_core::moments::{cos_mgf, mgf_bound, MomentTable};
use fateq_core::montecarlo::{
    closed_form_moment, closed_form_occupancy, estimate_moments, estimate_strip_occupancy,
    estimate_submersion_occupancy, two_piece_classify, OccupancyEstimate, Sampling,
};
use fateq_core::rng::SeedStream;
use fateq_core::sphere::{cap_fraction, strip_fraction};
use fateq_core::{Params, Point};

use crate::csv::CsvRow;
use crate::parse::{Instance, InstanceSpec, PointSpec};
use crate::CliError;

/// Stream used for the Monte Carlo draws of a single-run command.
pub const SAMPLE_STREAM: u64 = 0;
/// Stream used to draw a random `p`, disjoint from the sample stream.
pub const POINT_STREAM: u64 = 1;

/// Seed, sample count and worker count shared by the sampling commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: usize,
    pub workers: usize,
}

impl RunOptions {
    pub fn sampling(&self) -> Sampling {
        Sampling::new(self.samples, SeedStream::new(self.seed, SAMPLE_STREAM))
            .with_workers(self.workers)
    }

    pub fn point_stream(&self) -> SeedStream {
        SeedStream::new(self.seed, POINT_STREAM)
    }
}

const STRIP_BOUNDS: [&str; 5] = [
    "equator",
    "mean_concentration",
    "main1",
    "main2",
    "main2_best",
];

/// Exact strip fraction of `S^n` and every bound on it, one row per bound.
pub fn strip_rows(n: usize, epsilon: f64, delta: f64) -> Result<Vec<CsvRow>, CliError> {
    let report = bound_report(n, epsilon, &Params::new(delta)?)?;
    Ok(report
        .bound_values
        .iter()
        .filter(|b| STRIP_BOUNDS.contains(&b.name))
        .map(|b| CsvRow {
            n: Some(n),
            m: Some(n),
            epsilon: Some(epsilon),
            delta: b.delta,
            exact_fraction: Some(report.exact_fraction),
            bound_name: Some(b.name.to_string()),
            bound_value: Some(b.value),
            slack: Some(b.slack),
            ..CsvRow::new("strip")
        })
        .collect())
}

/// Every bound in the report, each next to the volume it bounds.
pub fn bounds_rows(n: usize, epsilon: f64, params: &Params) -> Result<Vec<CsvRow>, CliError> {
    let report = bound_report(n, epsilon, params)?;
    Ok(report
        .bound_values
        .iter()
        .map(|b| CsvRow {
            n: Some(n),
            m: Some(n),
            epsilon: Some(epsilon),
            delta: b.delta,
            exact_fraction: Some(b.reference),
            bound_name: Some(b.name.to_string()),
            bound_value: Some(b.value),
            slack: Some(b.slack),
            ..CsvRow::new("bound")
        })
        .collect())
}

/// Cap fraction of radius `r` (in the `epsilon` column). For `r > π/2` the
/// cap is a fattened hemisphere and the fattening bound is added.
pub fn cap_rows(n: usize, r: f64) -> Result<Vec<CsvRow>, CliError> {
    let fraction = cap_fraction(n, r)?;
    let base = CsvRow {
        n: Some(n),
        epsilon: Some(r),
        exact_fraction: Some(fraction),
        ..CsvRow::new("cap")
    };
    let mut rows = vec![base.clone()];
    let eps = r - std::f64::consts::FRAC_PI_2;
    if eps > 0.0 && eps < std::f64::consts::FRAC_PI_2 {
        let value = fattening_bound(n, eps)?;
        rows.push(CsvRow {
            bound_name: Some("fattening".into()),
            bound_value: Some(value),
            slack: Some(fraction - value.max(0.0)),
            ..base
        });
    }
    Ok(rows)
}

pub fn moment_name(k: usize) -> String {
    format!("cos2k_moment_k{k}")
}

/// `M_k(m)` for `k = 0..=max_k`, then the MGF and its bound at each `t`.
pub fn moment_rows(m: usize, max_k: usize, ts: &[f64]) -> Result<Vec<CsvRow>, CliError> {
    let table = MomentTable::<f64>::build(m, max_k)?;
    let mut rows: Vec<CsvRow> = table
        .values()
        .iter()
        .enumerate()
        .map(|(k, &v)| CsvRow {
            m: Some(m),
            bound_name: Some(moment_name(k)),
            bound_value: Some(v),
            ..CsvRow::new("moment")
        })
        .collect();
    for &t in ts {
        let mgf = cos_mgf(m, t, 1e-16)?;
        let bound = mgf_bound(m, t)?;
        rows.push(CsvRow {
            m: Some(m),
            exact_fraction: Some(mgf),
            bound_name: Some(format!("mgf_bound_t{t}")),
            bound_value: Some(bound),
            slack: Some(bound - mgf),
            ..CsvRow::new("mgf")
        });
    }
    Ok(rows)
}

fn minimal(instance: &Instance) -> Result<&MinimalInstance, CliError> {
    match instance {
        Instance::Minimal(i) => Ok(i),
        Instance::Submersion(_) => Err(CliError::Usage(
            "this command needs a minimal instance (subsphere or torus)".into(),
        )),
    }
}

/// Empirical `E[⟨p, x⟩^{2k}]` on the instance against `M_k(m)`.
pub fn moment_estimate_rows(
    spec: &InstanceSpec,
    point: PointSpec,
    max_k: usize,
    opts: &RunOptions,
) -> Result<Vec<CsvRow>, CliError> {
    let instance = spec.build()?;
    let inst = minimal(&instance)?;
    let p = point.resolve(&instance, opts.point_stream())?;
    let m = inst.intrinsic_dim();
    let est = estimate_moments(inst, &p, max_k, &opts.sampling())?;
    let table = MomentTable::<f64>::build(m, max_k)?;
    est.iter()
        .zip(table.values())
        .enumerate()
        .map(|(k, (&(e, se), &mk))| {
            Ok(CsvRow {
                n: Some(inst.ambient_dim()),
                m: Some(m),
                exact_fraction: closed_form_moment(inst, &p, k)?,
                estimate: Some(e),
                stderr: Some(se),
                bound_name: Some(moment_name(k)),
                bound_value: Some(mk),
                slack: Some(mk - e),
                samples: Some(opts.samples),
                seed: Some(opts.seed),
                ..CsvRow::new("moment_estimate")
            })
        })
        .collect()
}

fn estimate_row(
    est: &OccupancyEstimate,
    n: usize,
    m: usize,
    epsilon: f64,
    exact: Option<f64>,
    seed: u64,
) -> CsvRow {
    CsvRow {
        n: Some(n),
        m: Some(m),
        epsilon: Some(epsilon),
        exact_fraction: exact,
        estimate: Some(est.fraction),
        stderr: Some(est.stderr),
        samples: Some(est.sample_count),
        seed: Some(seed),
        ..CsvRow::new("estimate")
    }
}

/// Occupancy estimate for the instance, followed by one row per bound with
/// `slack = estimate − max(0, bound)`.
pub fn estimate_rows(
    spec: &InstanceSpec,
    point: PointSpec,
    epsilon: f64,
    deltas: &[f64],
    opts: &RunOptions,
) -> Result<Vec<CsvRow>, CliError> {
    let instance = spec.build()?;
    let p = point.resolve(&instance, opts.point_stream())?;
    estimate_rows_at(&instance, &p, epsilon, deltas, opts.sampling(), opts.seed)
}

pub(crate) fn estimate_rows_at(
    instance: &Instance,
    p: &Point,
    epsilon: f64,
    deltas: &[f64],
    sampling: Sampling,
    seed: u64,
) -> Result<Vec<CsvRow>, CliError> {
    let (n, m) = (instance.ambient_dim(), instance.intrinsic_dim());
    let (est, exact, bound_dim) = match instance {
        Instance::Minimal(inst) => (
            estimate_strip_occupancy(inst, p, epsilon, &sampling)?,
            closed_form_occupancy(inst, p, epsilon)?,
            m,
        ),
        // The occupancy equals the strip fraction of the base sphere.
        Instance::Submersion(sub) => (
            estimate_submersion_occupancy(sub, p, epsilon, &sampling)?,
            Some(strip_fraction(n, epsilon)?),
            n,
        ),
    };
    let head = estimate_row(&est, n, m, epsilon, exact, seed);
    let bound = |name: &str, delta: Option<f64>, value: f64| CsvRow {
        delta,
        bound_name: Some(name.to_string()),
        bound_value: Some(value),
        slack: Some(est.fraction - value.max(0.0)),
        ..head.clone()
    };
    let mut rows = vec![head.clone()];
    if let Instance::Submersion(_) = instance {
        rows.push(bound("equator", None, equator_bound(bound_dim, epsilon)?));
    }
    rows.push(bound("main1", None, main1_bound(bound_dim, epsilon)?));
    for &d in deltas {
        rows.push(bound("main2", Some(d), main2_bound(bound_dim, epsilon, d)?));
    }
    let best = main2_best_delta(bound_dim, epsilon)?;
    rows.push(bound(
        "main2_best",
        Some(best),
        main2_bound(bound_dim, epsilon, best)?,
    ));
    Ok(rows)
}

/// Sign counts of `⟨p, x⟩` over the samples, then the verdict row.
pub fn two_piece_rows(
    spec: &InstanceSpec,
    point: PointSpec,
    tol: f64,
    opts: &RunOptions,
) -> Result<Vec<CsvRow>, CliError> {
    let instance = spec.build()?;
    let inst = minimal(&instance)?;
    let p = point.resolve(&instance, opts.point_stream())?;
    let verdict = two_piece_classify(inst, &p, tol, &opts.sampling())?;
    let base = CsvRow {
        n: Some(inst.ambient_dim()),
        m: Some(inst.intrinsic_dim()),
        samples: Some(opts.samples),
        seed: Some(opts.seed),
        ..CsvRow::new("two_piece")
    };
    let count = |name: &str, c: u64| CsvRow {
        bound_name: Some(name.to_string()),
        bound_value: Some(c as f64),
        ..base.clone()
    };
    Ok(vec![
        count("positive", verdict.positive),
        count("negative", verdict.negative),
        count("equatorial", verdict.equatorial),
        CsvRow {
            bound_name: Some(verdict.kind.to_string()),
            ..CsvRow {
                kind: "two_piece_verdict",
                ..base
            }
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn opts(samples: usize) -> RunOptions {
        RunOptions {
            seed: 7,
            samples,
            workers: 2,
        }
    }

    #[test]
    fn strip_examples() {
        let rows = strip_rows(2, FRAC_PI_6, 0.25).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert!((r.exact_fraction.unwrap() - 0.5).abs() < 1e-12);
            assert!(r.slack.unwrap() >= -1e-12);
        }
        let rows = strip_rows(1, FRAC_PI_4, 0.0).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].exact_fraction.unwrap() - 0.5).abs() < 1e-12);
        let err = strip_rows(3, 2.0, 0.25).unwrap_err();
        assert!(err.to_string().contains("epsilon in (0, pi/2)"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn cap_adds_fattening_past_hemisphere() {
        assert_eq!(cap_rows(3, 1.0).unwrap().len(), 1);
        let rows = cap_rows(3, 2.0).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].slack.unwrap() >= 0.0);
    }

    #[test]
    fn moments_and_mgf() {
        let rows = moment_rows(4, 3, &[1.0]).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[1].bound_value, Some(0.2));
        assert!(rows[4].slack.unwrap() > 0.0);
    }

    #[test]
    fn torus_estimate_matches_closed_form() {
        let eps = (1.0 / (2.0 * 2f64.sqrt())).asin();
        let spec: InstanceSpec = "torus 1,1".parse().unwrap();
        let rows = estimate_rows(&spec, PointSpec::Axis(0), eps, &[0.25], &opts(100_000)).unwrap();
        let head = &rows[0];
        assert!((head.exact_fraction.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((head.estimate.unwrap() - 1.0 / 3.0).abs() <= 4.0 * head.stderr.unwrap());
        assert!(rows[1..]
            .iter()
            .all(|r| r.slack.unwrap() + 4.0 * head.stderr.unwrap() >= 0.0));
    }

    #[test]
    fn submersion_scale_invariance() {
        let a: InstanceSpec = "submersion 4 0.1".parse().unwrap();
        let b: InstanceSpec = "submersion 4 10".parse().unwrap();
        let ra = estimate_rows(&a, PointSpec::Axis(0), 0.4, &[], &opts(20_000)).unwrap();
        let rb = estimate_rows(&b, PointSpec::Axis(0), 0.4, &[], &opts(20_000)).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn two_piece_orthogonal() {
        let spec: InstanceSpec = "subsphere 2 4".parse().unwrap();
        let rows = two_piece_rows(&spec, PointSpec::Orthogonal, 1e-9, &opts(5000)).unwrap();
        assert_eq!(rows[3].bound_name.as_deref(), Some("ContainedInEquator"));
        assert_eq!(rows[2].bound_value, Some(5000.0));
        let rows = two_piece_rows(
            &"torus 1,1".parse().unwrap(),
            PointSpec::Random,
            1e-9,
            &opts(5000),
        )
        .unwrap();
        assert_eq!(rows[3].bound_name.as_deref(), Some("Crosses"));
    }

    #[test]
    fn moment_estimates_on_subsphere() {
        let spec: InstanceSpec = "subsphere 3 6".parse().unwrap();
        let rows = moment_estimate_rows(&spec, PointSpec::Axis(1), 4, &opts(50_000)).unwrap();
        for r in &rows[1..] {
            let exact = r.exact_fraction.unwrap();
            assert!((r.estimate.unwrap() - exact).abs() <= 4.0 * r.stderr.unwrap());
            assert!((exact - r.bound_value.unwrap()).abs() < 1e-14);
        }
    }
}
