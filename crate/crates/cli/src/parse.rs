//! Parsers for angles, instance specifications and point specifications.

use fateq_core::manifolds::sample_sphere;
use fateq_core::manifolds::{
    CliffordTorus, GreatSubsphere, MinimalInstance, ProductSubmersion, Sampler,
};
use fateq_core::rng::SeedStream;
use fateq_core::sphere::SpherePoint;
use fateq_core::Point;

use crate::CliError;

/// Parses a real number, `pi`, `pi/d`, `k*pi/d` or `asin(x)`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || CliError::Usage(format!("cannot parse angle '{text}'"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    if let Some(inner) = t.strip_prefix("asin(").and_then(|s| s.strip_suffix(')')) {
        let x: f64 = inner.parse().map_err(|_| bad())?;
        return Ok(x.asin());
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let factor = match num {
        "pi" => 1.0,
        _ => num
            .strip_suffix("*pi")
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    Ok(factor * std::f64::consts::PI / den)
}

pub fn parse_list<T, F>(text: &str, item: F) -> Result<Vec<T>, CliError>
where
    F: Fn(&str) -> Result<T, CliError>,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn parse_usize(text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("expected a non-negative integer, got '{text}'")))
}

fn parse_f64(text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("expected a number, got '{text}'")))
}

/// What to sample: `subsphere m n`, `torus m1,m2,…` or `submersion n delta`.
/// Fields may be separated by spaces or colons.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    Subsphere { m: usize, n: usize },
    Torus(Vec<usize>),
    Submersion { n: usize, delta: f64 },
}

impl std::str::FromStr for InstanceSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text
            .split(|c: char| c == ':' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let usage = || {
            CliError::Usage(format!(
                "cannot parse instance '{text}'; expected 'subsphere M N', 'torus M1,M2,...' or 'submersion N DELTA'"
            ))
        };
        match parts.as_slice() {
            ["subsphere", m, n] => Ok(InstanceSpec::Subsphere {
                m: parse_usize(m)?,
                n: parse_usize(n)?,
            }),
            ["torus", dims] => Ok(InstanceSpec::Torus(parse_list(dims, parse_usize)?)),
            ["submersion", n, delta] => Ok(InstanceSpec::Submersion {
                n: parse_usize(n)?,
                delta: parse_f64(delta)?,
            }),
            _ => Err(usage()),
        }
    }
}

/// A built instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Minimal(MinimalInstance),
    Submersion(ProductSubmersion),
}

impl Instance {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Instance::Minimal(i) => i.ambient_dim(),
            Instance::Submersion(s) => s.ambient_dim(),
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Instance::Minimal(i) => i.intrinsic_dim(),
            Instance::Submersion(s) => s.intrinsic_dim(),
        }
    }
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance, CliError> {
        Ok(match self {
            InstanceSpec::Subsphere { m, n } => {
                Instance::Minimal(GreatSubsphere::coordinate(*m, *n)?.into())
            }
            InstanceSpec::Torus(dims) => Instance::Minimal(CliffordTorus::new(dims)?.into()),
            InstanceSpec::Submersion { n, delta } => {
                Instance::Submersion(ProductSubmersion::new(*n, *delta)?)
            }
        })
    }
}

/// Where to put `p`: a coordinate axis, a uniform random point of the
/// ambient sphere, a random point in the span of a subsphere, or a point
/// orthogonal to a subsphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSpec {
    Axis(usize),
    Random,
    RandomInSpan,
    Orthogonal,
}

impl std::str::FromStr for PointSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text
            .split(|c: char| c == ':' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        match parts.as_slice() {
            ["axis", k] => Ok(PointSpec::Axis(parse_usize(k)?)),
            [k] if k.starts_with("axis") && k.len() > 4 => Ok(PointSpec::Axis(parse_usize(&k[4..])?)),
            ["random"] => Ok(PointSpec::Random),
            ["random-in-span"] => Ok(PointSpec::RandomInSpan),
            ["orthogonal"] => Ok(PointSpec::Orthogonal),
            _ => Err(CliError::Usage(format!(
                "cannot parse point '{text}'; expected 'axis K', 'random', 'random-in-span' or 'orthogonal'"
            ))),
        }
    }
}

impl PointSpec {
    /// Resolves the point; random choices draw from `stream`.
    pub fn resolve(&self, instance: &Instance, stream: SeedStream) -> Result<Point, CliError> {
        let n = instance.ambient_dim();
        match (self, instance) {
            (PointSpec::Axis(k), _) => Ok(SpherePoint::axis(n, *k)?),
            (PointSpec::Random, _) => Ok(sample_sphere(n, 1, stream)?.remove(0)),
            (PointSpec::RandomInSpan, Instance::Minimal(MinimalInstance::Subsphere(s))) => {
                let u = sample_sphere(s.intrinsic_dim(), 1, stream)?.remove(0);
                Ok(SpherePoint::normalized(s.embed(u.coords())?)?)
            }
            (PointSpec::Orthogonal, Instance::Minimal(MinimalInstance::Subsphere(s))) => {
                if s.intrinsic_dim() == n {
                    return Err(CliError::Usage(
                        "no point is orthogonal to a subsphere of full dimension".into(),
                    ));
                }
                Ok(SpherePoint::axis(n, s.intrinsic_dim() + 1)?)
            }
            (PointSpec::RandomInSpan, _) => Ok(sample_sphere(n, 1, stream)?.remove(0)),
            (PointSpec::Orthogonal, _) => Err(CliError::Usage(
                "'orthogonal' is only defined for subsphere instances".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("pi/6").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("2*pi/5").unwrap(), 2.0 * PI / 5.0);
        assert_eq!(parse_angle("asin(0.5)").unwrap(), 0.5_f64.asin());
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn instances() {
        assert_eq!(
            "subsphere 3 9".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::Subsphere { m: 3, n: 9 }
        );
        assert_eq!(
            "torus:1,1".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::Torus(vec![1, 1])
        );
        assert_eq!(
            "submersion 4 0.1".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::Submersion { n: 4, delta: 0.1 }
        );
        assert!("cube 3".parse::<InstanceSpec>().is_err());
        assert!("torus a,b".parse::<InstanceSpec>().is_err());
        let built = "torus 2,1"
            .parse::<InstanceSpec>()
            .unwrap()
            .build()
            .unwrap();
        assert_eq!((built.intrinsic_dim(), built.ambient_dim()), (3, 4));
        assert!("subsphere 5 3"
            .parse::<InstanceSpec>()
            .unwrap()
            .build()
            .is_err());
    }

    #[test]
    fn points() {
        assert_eq!("axis 2".parse::<PointSpec>().unwrap(), PointSpec::Axis(2));
        assert_eq!("axis:0".parse::<PointSpec>().unwrap(), PointSpec::Axis(0));
        assert_eq!("axis0".parse::<PointSpec>().unwrap(), PointSpec::Axis(0));
        assert!("somewhere".parse::<PointSpec>().is_err());
        let inst = "subsphere 2 5"
            .parse::<InstanceSpec>()
            .unwrap()
            .build()
            .unwrap();
        let s = SeedStream::new(1, 1);
        let p = PointSpec::RandomInSpan.resolve(&inst, s).unwrap();
        assert!(p.coords()[3..].iter().all(|&x| x == 0.0));
        let q = PointSpec::Orthogonal.resolve(&inst, s).unwrap();
        assert_eq!(q.coords()[3], 1.0);
        assert!(PointSpec::Axis(9).resolve(&inst, s).is_err());
    }
}
