//! Dimension sweeps driven by a `key = value` configuration file.
//!
//! ```text
//! # comments start with '#'
//! n_min = 10
//! n_max = 200
//! n_step = 10
//! epsilons = 0.3, pi/6
//! deltas = 0.1, 0.25
//! families = subsphere, torus, submersion
//! samples = 10000
//! seed = 42
//! output = sweep.csv
//! svg = sweep.svg
//! ```

use std::path::PathBuf;

use fateq_core::bounds::bound_report;
use fateq_core::manifolds::{CliffordTorus, GreatSubsphere, ProductSubmersion};
use fateq_core::montecarlo::Sampling;
use fateq_core::rng::SeedStream;
use fateq_core::sphere::SpherePoint;
use fateq_core::Params;

use crate::commands::estimate_rows_at;
use crate::csv::CsvRow;
use crate::parse::{parse_angle, parse_list, Instance};
use crate::svg::{Panel, Series, Style, PALETTE};
use crate::CliError;

/// Stream index reserved for sweep sampling; each (n, ε, family) cell uses
/// a child of it.
pub const SWEEP_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    Subsphere,
    Torus,
    Submersion,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Subsphere => "subsphere",
            Family::Torus => "torus",
            Family::Submersion => "submersion",
        }
    }

    fn index(self) -> u64 {
        self as u64
    }

    /// The family member of intrinsic dimension `n`, or `None` if there is
    /// none (a torus needs `n >= 2`).
    ///
    /// subsphere: `S^n ⊂ S^{n+1}`; torus: `S^{⌈n/2⌉} × S^{⌊n/2⌋}`;
    /// submersion: `S^n × S¹` over `S^n`.
    pub fn member(self, n: usize) -> Result<Option<Instance>, CliError> {
        Ok(match self {
            Family::Subsphere => Some(Instance::Minimal(
                GreatSubsphere::coordinate(n, n + 1)?.into(),
            )),
            Family::Torus if n < 2 => None,
            Family::Torus => Some(Instance::Minimal(
                CliffordTorus::new(&[n - n / 2, n / 2])?.into(),
            )),
            Family::Submersion => Some(Instance::Submersion(ProductSubmersion::new(n, 1.0)?)),
        })
    }
}

impl std::str::FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "subsphere" => Ok(Family::Subsphere),
            "torus" => Ok(Family::Torus),
            "submersion" => Ok(Family::Submersion),
            other => Err(CliError::Usage(format!(
                "unknown family '{other}'; expected subsphere, torus or submersion"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub n_step: usize,
    pub epsilons: Vec<f64>,
    pub deltas: Vec<f64>,
    pub families: Vec<Family>,
    /// Monte Carlo samples per cell; 0 skips the estimate rows.
    pub samples: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_min: 10,
            n_max: 200,
            n_step: 10,
            epsilons: vec![0.3],
            deltas: Vec::new(),
            families: Vec::new(),
            samples: 0,
            seed: 0,
            output: None,
            svg: None,
        }
    }
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("bad value for '{key}': '{v}'")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = SweepConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "line {}: expected key = value, got '{raw}'",
                    lineno + 1
                ))
            })?;
            let (key, v) = (key.trim(), v.trim());
            match key {
                "n_min" => cfg.n_min = value(key, v)?,
                "n_max" => cfg.n_max = value(key, v)?,
                "n_step" => cfg.n_step = value(key, v)?,
                "epsilons" => cfg.epsilons = parse_list(v, parse_angle)?,
                "deltas" => cfg.deltas = parse_list(v, |s| value("deltas", s))?,
                "families" => cfg.families = parse_list(v, str::parse)?,
                "samples" => cfg.samples = value(key, v)?,
                "seed" => cfg.seed = value(key, v)?,
                "output" => cfg.output = Some(PathBuf::from(v)),
                "svg" => cfg.svg = Some(PathBuf::from(v)),
                _ => {
                    return Err(CliError::Usage(format!(
                        "line {}: unknown key '{key}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_min == 0 || self.n_min > self.n_max || self.n_step == 0 {
            return Err(CliError::Usage(format!(
                "dimension range {}..={} step {} must be non-empty with 1 <= n_min and step >= 1",
                self.n_min, self.n_max, self.n_step
            )));
        }
        if self.epsilons.is_empty() {
            return Err(CliError::Usage("epsilons must not be empty".into()));
        }
        if let Some(e) = self
            .epsilons
            .iter()
            .find(|e| !(**e > 0.0 && **e < std::f64::consts::FRAC_PI_2))
        {
            return Err(CliError::Usage(format!(
                "epsilon = {e} violates epsilon in (0, pi/2)"
            )));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(**d >= 0.0 && **d < 0.5)) {
            return Err(CliError::Usage(format!(
                "delta = {d} violates delta in [0, 1/2)"
            )));
        }
        if !self.families.is_empty() && self.samples == 0 {
            return Err(CliError::Usage("families need samples >= 1".into()));
        }
        Ok(())
    }

    pub fn dimensions(&self) -> impl Iterator<Item = usize> + '_ {
        (self.n_min..=self.n_max).step_by(self.n_step)
    }
}

/// Rows for every `(n, ε)`: the exact strip fraction with every theorem
/// bound, then one estimate block per family.
pub fn sweep_rows(cfg: &SweepConfig, workers: usize) -> Result<Vec<CsvRow>, CliError> {
    cfg.validate()?;
    let deltas = if cfg.deltas.is_empty() {
        vec![0.0]
    } else {
        cfg.deltas.clone()
    };
    let mut rows = Vec::new();
    for n in cfg.dimensions() {
        for (ei, &eps) in cfg.epsilons.iter().enumerate() {
            for (di, &delta) in deltas.iter().enumerate() {
                let report = bound_report(n, eps, &Params::new(delta)?)?;
                for b in &report.bound_values {
                    let keep = match b.name {
                        "equator" | "main1" | "main2_best" => di == 0,
                        "main2" => true,
                        "mean_concentration" => b.guaranteed,
                        _ => false,
                    };
                    if keep {
                        rows.push(CsvRow {
                            n: Some(n),
                            m: Some(n),
                            epsilon: Some(eps),
                            delta: b.delta,
                            exact_fraction: Some(report.exact_fraction),
                            bound_name: Some(b.name.to_string()),
                            bound_value: Some(b.value),
                            slack: Some(b.slack),
                            ..CsvRow::new("sweep_exact")
                        });
                    }
                }
            }
            for &family in &cfg.families {
                let Some(instance) = family.member(n)? else {
                    continue;
                };
                let stream = SeedStream::new(cfg.seed, SWEEP_STREAM)
                    .child(n as u64)
                    .child(ei as u64)
                    .child(family.index());
                let p = SpherePoint::axis(instance.ambient_dim(), 0)?;
                let sampling = Sampling::new(cfg.samples, stream).with_workers(workers);
                for row in estimate_rows_at(&instance, &p, eps, &cfg.deltas, sampling, cfg.seed)? {
                    rows.push(CsvRow {
                        kind: family_kind(family),
                        ..row
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn family_kind(f: Family) -> &'static str {
    match f {
        Family::Subsphere => "sweep_mc_subsphere",
        Family::Torus => "sweep_mc_torus",
        Family::Submersion => "sweep_mc_submersion",
    }
}

/// One panel per ε: exact fraction against `n`, the clamped bounds as
/// dashed curves, and Monte Carlo estimates as markers.
pub fn sweep_panels(cfg: &SweepConfig, rows: &[CsvRow]) -> Vec<Panel> {
    let x_range = (
        cfg.n_min as f64,
        cfg.dimensions().last().unwrap_or(cfg.n_min) as f64,
    );
    cfg.epsilons
        .iter()
        .map(|&eps| {
            let at_eps: Vec<&CsvRow> = rows.iter().filter(|r| r.epsilon == Some(eps)).collect();
            let curve = |kind: &str, name: Option<&str>, pick: &dyn Fn(&CsvRow) -> Option<f64>| {
                let mut pts: Vec<(f64, f64)> = at_eps
                    .iter()
                    .filter(|r| {
                        r.kind == kind && (name.is_none() || r.bound_name.as_deref() == name)
                    })
                    .filter(|r| r.delta.is_none() || r.bound_name.as_deref() == Some("main2_best"))
                    .filter_map(|r| Some((r.m? as f64, pick(r)?)))
                    .collect();
                pts.dedup_by(|a, b| a.0 == b.0);
                pts
            };
            let clamped = |r: &CsvRow| r.bound_value.map(|v| v.max(0.0));
            let mut series = vec![Series {
                label: "exact strip".into(),
                color: PALETTE[0],
                style: Style::Solid,
                points: curve("sweep_exact", Some("main1"), &|r| r.exact_fraction),
            }];
            for (i, name) in ["equator", "main1", "main2_best"].into_iter().enumerate() {
                series.push(Series {
                    label: format!("{name} bound"),
                    color: PALETTE[1 + i],
                    style: Style::Dashed,
                    points: curve("sweep_exact", Some(name), &clamped),
                });
            }
            for (i, &family) in cfg.families.iter().enumerate() {
                series.push(Series {
                    label: format!("{} MC", family.name()),
                    color: PALETTE[(4 + i) % PALETTE.len()],
                    style: Style::Markers,
                    points: curve(family_kind(family), Some("main1"), &|r| r.estimate),
                });
            }
            Panel {
                title: format!("strip fraction vs dimension, epsilon = {eps:.4}"),
                x_label: "dimension".into(),
                y_label: "normalized volume".into(),
                x_range,
                y_range: (0.0, 1.0),
                series,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_config() {
        let cfg = SweepConfig::parse(
            "# demo\nn_min = 2\nn_max=6\nn_step = 2\nepsilons = 0.3, pi/6\ndeltas=0.1\nfamilies = torus, submersion\nsamples = 1000\nseed = 9\noutput = out.csv # trailing\n",
        )
        .unwrap();
        assert_eq!(cfg.dimensions().collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!((cfg.epsilons[1] - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        assert_eq!(cfg.families, vec![Family::Torus, Family::Submersion]);
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
        assert!(SweepConfig::parse("bogus = 1").is_err());
        assert!(SweepConfig::parse("n_min 3").is_err());
        let bad = SweepConfig {
            epsilons: vec![2.0],
            ..SweepConfig::default()
        };
        assert!(bad
            .validate()
            .unwrap_err()
            .to_string()
            .contains("epsilon in (0, pi/2)"));
        let bad = SweepConfig {
            n_min: 5,
            n_max: 4,
            ..SweepConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn exact_rows_increase_and_dominate() {
        let cfg = SweepConfig {
            deltas: vec![0.1, 0.25, 0.45],
            ..SweepConfig::default()
        };
        let rows = sweep_rows(&cfg, 1).unwrap();
        let exact: Vec<f64> = rows
            .iter()
            .filter(|r| r.bound_name.as_deref() == Some("main1"))
            .map(|r| r.exact_fraction.unwrap())
            .collect();
        assert_eq!(exact.len(), 20);
        assert!(exact.windows(2).all(|w| w[1] > w[0]));
        assert!(rows.iter().all(|r| r.slack.unwrap() >= -1e-12));
    }

    #[test]
    fn estimates_are_worker_independent() {
        let cfg = SweepConfig {
            n_min: 1,
            n_max: 5,
            n_step: 2,
            families: vec![Family::Subsphere, Family::Torus, Family::Submersion],
            samples: 20_000,
            seed: 3,
            ..SweepConfig::default()
        };
        let a = sweep_rows(&cfg, 1).unwrap();
        assert_eq!(a, sweep_rows(&cfg, 4).unwrap());
        // no torus at n = 1
        assert!(!a
            .iter()
            .any(|r| r.kind == "sweep_mc_torus" && r.m == Some(1)));
        for r in a
            .iter()
            .filter(|r| r.kind.starts_with("sweep_mc") && r.bound_name.as_deref() == Some("main1"))
        {
            let exact = r.exact_fraction.unwrap();
            assert!(
                (r.estimate.unwrap() - exact).abs() <= 4.0 * r.stderr.unwrap(),
                "{r:?}"
            );
        }
        let panels = sweep_panels(&cfg, &a);
        assert_eq!(panels.len(), 1);
        assert_eq!(panels[0].series.len(), 7);
        assert_eq!(panels[0].series[0].points.len(), 3);
    }
}
