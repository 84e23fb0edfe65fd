//! Sampleable closed minimal submanifolds of `S^n(1)` and the product
//! submersion `S^n × S¹(δ) → S^n`.

use crate::rng::{map_chunks, SeedStream, StreamRng};
use crate::sphere::{dot, norm, SpherePoint};
use crate::{Error, Point, Result};

/// Orthonormality tolerance for subsphere frames.
pub const FRAME_TOLERANCE: f64 = 1e-10;
/// Tolerance on the Clifford torus radii.
pub const RADIUS_TOLERANCE: f64 = 1e-12;
/// Tolerance of the minimality certificate on `m_i / r_i² = m`.
pub const MINIMALITY_TOLERANCE: f64 = 1e-9;

/// Something that draws points of `S^n(1) ⊂ R^{n+1}` distributed by a
/// normalized volume.
pub trait Sampler: Sync {
    /// The `n` of the ambient sphere `S^n`.
    fn ambient_dim(&self) -> usize;

    /// Dimension of the sampled manifold.
    fn intrinsic_dim(&self) -> usize;

    /// Writes one sample's `n + 1` ambient coordinates into `out`.
    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]);
}

/// Draws a uniform point of `S^k` into `out` (length `k + 1`), scaled by
/// `radius`.
fn uniform_on_sphere(rng: &mut StreamRng, out: &mut [f64], radius: f64) {
    loop {
        rng.fill_normals(out);
        let r = norm(out);
        // A zero Gaussian vector has probability zero; redraw if it happens.
        if r > 0.0 {
            let scale = radius / r;
            out.iter_mut().for_each(|x| *x *= scale);
            return;
        }
    }
}

/// Uniform measure on `S^n` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformSphere {
    pub n: usize,
}

impl Sampler for UniformSphere {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn intrinsic_dim(&self) -> usize {
        self.n
    }

    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]) {
        uniform_on_sphere(rng, out, 1.0);
    }
}

fn collect_points<S: Sampler + ?Sized>(
    sampler: &S,
    count: usize,
    stream: SeedStream,
) -> Vec<Point> {
    let len = sampler.ambient_dim() + 1;
    map_chunks(count, stream, 1, |rng, c| {
        (0..c)
            .map(|_| {
                let mut x = vec![0.0; len];
                sampler.sample_into(rng, &mut x);
                SpherePoint::from_unit_unchecked(x)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `count` independent uniform points of `S^n`, Gaussian vectors normalized.
pub fn sample_sphere(n: usize, count: usize, stream: SeedStream) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    Ok(collect_points(&UniformSphere { n }, count, stream))
}

/// The totally geodesic `S^m ⊂ S^n` cut out by the span of an orthonormal
/// frame of `m + 1` vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct GreatSubsphere {
    m: usize,
    n: usize,
    frame: Vec<Vec<f64>>,
}

impl GreatSubsphere {
    /// The subsphere spanned by the first `m + 1` coordinate axes.
    pub fn coordinate(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::InvalidInstance(format!(
                "great subsphere needs 1 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        let frame = (0..=m)
            .map(|i| {
                let mut v = vec![0.0; n + 1];
                v[i] = 1.0;
                v
            })
            .collect();
        Ok(Self { m, n, frame })
    }

    pub fn from_frame(frame: Vec<Vec<f64>>) -> Result<Self> {
        if frame.len() < 2 {
            return Err(Error::InvalidInstance(
                "frame needs at least 2 vectors".into(),
            ));
        }
        let len = frame[0].len();
        if len < frame.len() {
            return Err(Error::InvalidInstance(format!(
                "{} frame vectors cannot be independent in R^{len}",
                frame.len()
            )));
        }
        let subsphere = Self {
            m: frame.len() - 1,
            n: len - 1,
            frame,
        };
        subsphere.validate()?;
        Ok(subsphere)
    }

    /// A subsphere with a random frame (Gram–Schmidt on Gaussian vectors).
    pub fn random(m: usize, n: usize, stream: SeedStream) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::InvalidInstance(format!(
                "great subsphere needs 1 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        let mut rng = stream.chunk_rng(0);
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        while frame.len() <= m {
            let mut v = vec![0.0; n + 1];
            rng.fill_normals(&mut v);
            for _ in 0..2 {
                for f in &frame {
                    let c = dot(&v, f);
                    v.iter_mut().zip(f).for_each(|(x, y)| *x -= c * y);
                }
            }
            let r = norm(&v);
            if r > 1e-6 {
                v.iter_mut().for_each(|x| *x /= r);
                frame.push(v);
            }
        }
        Self::from_frame(frame)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.frame.iter().enumerate() {
            if a.len() != self.n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: self.n + 1,
                    found: a.len(),
                });
            }
            for (j, b) in self.frame.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = dot(a, b);
                if !((got - want).abs() <= FRAME_TOLERANCE) {
                    return Err(Error::InvalidInstance(format!(
                        "frame vectors {i} and {j} have inner product {got}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Maps coefficients `u ∈ R^{m+1}` to `Σ u_i f_i`.
    pub fn embed(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.m + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.m + 1,
                found: u.len(),
            });
        }
        let mut x = vec![0.0; self.n + 1];
        for (c, f) in u.iter().zip(&self.frame) {
            x.iter_mut().zip(f).for_each(|(xi, fi)| *xi += c * fi);
        }
        Ok(x)
    }

    /// Frame coefficients `⟨p, f_i⟩` of the orthogonal projection of `p`.
    pub fn coefficients(&self, p: &[f64]) -> Vec<f64> {
        self.frame.iter().map(|f| dot(f, p)).collect()
    }
}

impl Sampler for GreatSubsphere {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn intrinsic_dim(&self) -> usize {
        self.m
    }

    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]) {
        let mut u = vec![0.0; self.m + 1];
        uniform_on_sphere(rng, &mut u, 1.0);
        out.iter_mut().for_each(|x| *x = 0.0);
        for (c, f) in u.iter().zip(&self.frame) {
            out.iter_mut().zip(f).for_each(|(xi, fi)| *xi += c * fi);
        }
    }
}

/// One factor `S^{dim}(radius)` of a generalized Clifford torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusFactor {
    pub dim: usize,
    pub radius: f64,
}

/// `S^{m_1}(r_1) × … × S^{m_k}(r_k) ⊂ S^n`, with the factors occupying
/// consecutive coordinate blocks of sizes `m_i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordTorus {
    factors: Vec<TorusFactor>,
}

impl CliffordTorus {
    /// The minimal torus with the given factor dimensions, radii
    /// `r_i = √(m_i / m)` where `m = Σ m_i`.
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidInstance(format!(
                "torus factor dimensions must be non-empty and positive, got {dims:?}"
            )));
        }
        let m: usize = dims.iter().sum();
        let factors = dims
            .iter()
            .map(|&d| TorusFactor {
                dim: d,
                radius: (d as f64 / m as f64).sqrt(),
            })
            .collect();
        Ok(Self { factors })
    }

    /// A product of spheres with arbitrary radii, for exercising the
    /// minimality certificate. Such a torus is rejected by the samplers
    /// unless the radii happen to be the minimal ones.
    pub fn with_radii_unchecked(factors: Vec<TorusFactor>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[TorusFactor] {
        &self.factors
    }

    /// Offset of each factor's coordinate block.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.factors
            .iter()
            .scan(0, |acc, f| {
                let start = *acc;
                *acc += f.dim + 1;
                Some(start)
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::InvalidInstance("torus has no factors".into()));
        }
        let m = self.intrinsic_dim() as f64;
        for f in &self.factors {
            let want = (f.dim as f64 / m).sqrt();
            if f.dim == 0 || !((f.radius - want).abs() <= RADIUS_TOLERANCE) {
                return Err(Error::InvalidInstance(format!(
                    "factor S^{}({}) is not minimal, radius must be {want}",
                    f.dim, f.radius
                )));
            }
        }
        let total: f64 = self.factors.iter().map(|f| f.radius * f.radius).sum();
        if !((total - 1.0).abs() <= RADIUS_TOLERANCE) {
            return Err(Error::InvalidInstance(format!(
                "squared radii sum to {total}, not 1"
            )));
        }
        Ok(())
    }

    /// Checks `m_i / r_i² = m` for every factor, the condition under which
    /// the coordinate functions satisfy `Δx = −m x`.
    pub fn minimality_certificate(&self) -> MinimalityCertificate {
        let m = self.intrinsic_dim();
        let eigenvalues: Vec<f64> = self
            .factors
            .iter()
            .map(|f| f.dim as f64 / (f.radius * f.radius))
            .collect();
        let pass = !eigenvalues.is_empty()
            && eigenvalues
                .iter()
                .all(|&e| (e - m as f64).abs() < MINIMALITY_TOLERANCE);
        MinimalityCertificate {
            intrinsic_dim: m,
            factor_eigenvalues: eigenvalues,
            pass,
        }
    }
}

impl Sampler for CliffordTorus {
    fn ambient_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim + 1).sum::<usize>() - 1
    }

    fn intrinsic_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]) {
        let mut rest = out;
        for f in &self.factors {
            let (block, tail) = rest.split_at_mut(f.dim + 1);
            uniform_on_sphere(rng, block, f.radius);
            rest = tail;
        }
    }
}

/// Result of [`CliffordTorus::minimality_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityCertificate {
    pub intrinsic_dim: usize,
    /// `m_i / r_i²` per factor.
    pub factor_eigenvalues: Vec<f64>,
    pub pass: bool,
}

/// A closed minimal submanifold with a sampler for its induced volume.
#[derive(Debug, Clone, PartialEq)]
pub enum MinimalInstance {
    Subsphere(GreatSubsphere),
    Torus(CliffordTorus),
}

impl MinimalInstance {
    pub fn validate(&self) -> Result<()> {
        match self {
            MinimalInstance::Subsphere(s) => s.validate(),
            MinimalInstance::Torus(t) => t.validate(),
        }
    }
}

impl Sampler for MinimalInstance {
    fn ambient_dim(&self) -> usize {
        match self {
            MinimalInstance::Subsphere(s) => s.ambient_dim(),
            MinimalInstance::Torus(t) => t.ambient_dim(),
        }
    }

    fn intrinsic_dim(&self) -> usize {
        match self {
            MinimalInstance::Subsphere(s) => s.intrinsic_dim(),
            MinimalInstance::Torus(t) => t.intrinsic_dim(),
        }
    }

    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]) {
        match self {
            MinimalInstance::Subsphere(s) => s.sample_into(rng, out),
            MinimalInstance::Torus(t) => t.sample_into(rng, out),
        }
    }
}

impl From<GreatSubsphere> for MinimalInstance {
    fn from(s: GreatSubsphere) -> Self {
        MinimalInstance::Subsphere(s)
    }
}

impl From<CliffordTorus> for MinimalInstance {
    fn from(t: CliffordTorus) -> Self {
        MinimalInstance::Torus(t)
    }
}

/// Samples by the normalized induced volume of a minimal instance.
///
/// For a torus the induced metric is the product of round metrics of radii
/// `r_i`, so independent uniform factors give the induced volume.
pub fn sample_minimal_instance(
    instance: &MinimalInstance,
    count: usize,
    stream: SeedStream,
) -> Result<Vec<Point>> {
    instance.validate()?;
    Ok(collect_points(instance, count, stream))
}

/// `Σ_δ = S^n × S¹` with metric `g_{S^n} + δ² g_{S¹}` and projection onto
/// the first factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductSubmersion {
    base_dim: usize,
    fiber_scale: f64,
}

impl ProductSubmersion {
    pub fn new(base_dim: usize, fiber_scale: f64) -> Result<Self> {
        if base_dim == 0 {
            return Err(Error::InvalidInstance(
                "submersion base needs n >= 1".into(),
            ));
        }
        if !(fiber_scale > 0.0) || !fiber_scale.is_finite() {
            return Err(Error::InvalidInstance(format!(
                "fiber scale must be positive, got {fiber_scale}"
            )));
        }
        Ok(Self {
            base_dim,
            fiber_scale,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fiber_scale(&self) -> f64 {
        self.fiber_scale
    }

    /// `vol(Σ_δ) = vol(S^n) · 2πδ`.
    pub fn total_volume(&self) -> Result<f64> {
        Ok(crate::sphere::sphere_surface_volume::<f64>(self.base_dim)?
            * std::f64::consts::TAU
            * self.fiber_scale)
    }

    /// `π(p, θ) = p`.
    pub fn project<'a>(&self, base: &'a Point, _fiber_angle: f64) -> &'a Point {
        base
    }

    /// Draws a base point into `out` and returns the fiber angle.
    pub fn sample_total_into(&self, rng: &mut StreamRng, out: &mut [f64]) -> f64 {
        uniform_on_sphere(rng, out, 1.0);
        std::f64::consts::TAU * rng.uniform()
    }
}

impl Sampler for ProductSubmersion {
    fn ambient_dim(&self) -> usize {
        self.base_dim
    }

    fn intrinsic_dim(&self) -> usize {
        self.base_dim + 1
    }

    /// Writes the projection of a total-space sample; the fiber angle is
    /// drawn and discarded so the stream matches
    /// [`sample_submersion_total_space`].
    fn sample_into(&self, rng: &mut StreamRng, out: &mut [f64]) {
        self.sample_total_into(rng, out);
    }
}

/// Samples `(base, fiber_angle)` by the normalized product volume. The
/// scale `δ` only multiplies the total volume, so the law does not depend
/// on it.
pub fn sample_submersion_total_space(
    sub: &ProductSubmersion,
    count: usize,
    stream: SeedStream,
) -> Vec<(Point, f64)> {
    let len = sub.base_dim + 1;
    map_chunks(count, stream, 1, |rng, c| {
        (0..c)
            .map(|_| {
                let mut x = vec![0.0; len];
                let angle = sub.sample_total_into(rng, &mut x);
                (SpherePoint::from_unit_unchecked(x), angle)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    const ROOT: u64 = 0x5EED;

    #[test]
    fn sphere_samples_are_unit_and_centered() {
        let count = 1_000_000;
        let n = 4;
        let pts = sample_sphere(n, count, SeedStream::new(ROOT, 0)).unwrap();
        assert_eq!(pts.len(), count);
        let mut sums = vec![0.0; n + 1];
        let mut cos2 = 0.0;
        for p in &pts {
            assert!((norm(p.coords()) - 1.0).abs() < 1e-12);
            sums.iter_mut().zip(p.coords()).for_each(|(s, x)| *s += x);
            cos2 += p.coords()[0].powi(2);
        }
        let bound = 4.0 / (count as f64).sqrt();
        assert!(sums.iter().all(|s| (s / count as f64).abs() < bound));
        // cos² r_p for p = e_0 has mean 1/(n+1) and variance 2n/((n+1)²(n+3)).
        let mean = cos2 / count as f64;
        let var = 2.0 * n as f64 / (((n + 1) * (n + 1) * (n + 3)) as f64);
        assert!((mean - 1.0 / (n + 1) as f64).abs() < 4.0 * (var / count as f64).sqrt());
        assert!(sample_sphere(0, 1, SeedStream::default()).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = SeedStream::new(ROOT, 3);
        let a = sample_sphere(6, 20_000, s).unwrap();
        let b = sample_sphere(6, 20_000, s).unwrap();
        assert_eq!(a, b);
        let c = sample_sphere(6, 20_000, SeedStream::new(ROOT, 4)).unwrap();
        assert_ne!(a, c);
        // A prefix of a longer run is the shorter run.
        let d = sample_sphere(6, 5_000, s).unwrap();
        assert_eq!(&a[..5_000], &d[..]);
    }

    #[test]
    fn coordinate_subsphere_samples() {
        let inst: MinimalInstance = GreatSubsphere::coordinate(2, 5).unwrap().into();
        let pts = sample_minimal_instance(&inst, 2_000, SeedStream::new(ROOT, 1)).unwrap();
        for p in &pts {
            assert_eq!(p.ambient_dimension(), 5);
            assert!(p.coords()[3..].iter().all(|&x| x == 0.0));
            assert!((norm(p.coords()) - 1.0).abs() < 1e-12);
        }
        assert!(GreatSubsphere::coordinate(4, 3).is_err());
        assert!(GreatSubsphere::coordinate(0, 3).is_err());
    }

    #[test]
    fn random_frames_are_orthonormal() {
        let s = GreatSubsphere::random(3, 9, SeedStream::new(ROOT, 9)).unwrap();
        s.validate().unwrap();
        assert_eq!((s.intrinsic_dim(), s.ambient_dim()), (3, 9));
        let x = s.embed(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!((norm(&x) - 1.0).abs() < 1e-12);
        let c = s.coefficients(&x);
        assert!(c.iter().all(|v| (v - 0.5).abs() < 1e-12));
        let bad = vec![vec![1.0, 0.0, 0.0], vec![0.6, 0.8, 0.0]];
        assert!(GreatSubsphere::from_frame(bad).is_err());
    }

    #[test]
    fn clifford_torus_samples() {
        let torus = CliffordTorus::new(&[1, 1]).unwrap();
        assert_eq!((torus.intrinsic_dim(), torus.ambient_dim()), (2, 3));
        assert!(torus
            .factors()
            .iter()
            .all(|f| (f.radius - FRAC_1_SQRT_2).abs() < 1e-15));
        let inst = MinimalInstance::from(torus);
        let count = 400_000;
        let pts = sample_minimal_instance(&inst, count, SeedStream::new(ROOT, 2)).unwrap();
        let mut cos2 = Vec::with_capacity(count);
        for p in &pts {
            let x = p.coords();
            assert!((norm(x) - 1.0).abs() < 1e-12);
            assert!((norm(&x[..2]) - FRAC_1_SQRT_2).abs() < 1e-12);
            assert!((norm(&x[2..]) - FRAC_1_SQRT_2).abs() < 1e-12);
            cos2.push(x[0] * x[0]);
        }
        // x₀ = cos α /√2, so E[x₀²] = 1/4 and Var = E[cos⁴α]/4 − 1/16 = 1/32.
        let mean = cos2.iter().sum::<f64>() / count as f64;
        assert!((mean - 0.25).abs() < 4.0 * (1.0 / 32.0 / count as f64).sqrt());
    }

    #[test]
    fn torus_with_three_factors() {
        let torus = CliffordTorus::new(&[2, 1, 3]).unwrap();
        assert_eq!(torus.intrinsic_dim(), 6);
        assert_eq!(torus.ambient_dim(), 8);
        assert_eq!(torus.block_offsets(), vec![0, 3, 5]);
        torus.validate().unwrap();
        assert!(torus.minimality_certificate().pass);
        assert!(CliffordTorus::new(&[]).is_err());
        assert!(CliffordTorus::new(&[2, 0]).is_err());
    }

    #[test]
    fn minimality_certificates() {
        let c = CliffordTorus::new(&[1, 1])
            .unwrap()
            .minimality_certificate();
        assert!(c.pass);
        assert!(c.factor_eigenvalues.iter().all(|e| (e - 2.0).abs() < 1e-12));

        let s21 = CliffordTorus::with_radii_unchecked(vec![
            TorusFactor {
                dim: 2,
                radius: (2.0_f64 / 3.0).sqrt(),
            },
            TorusFactor {
                dim: 1,
                radius: (1.0_f64 / 3.0).sqrt(),
            },
        ]);
        let c = s21.minimality_certificate();
        assert!(c.pass);
        assert!(c.factor_eigenvalues.iter().all(|e| (e - 3.0).abs() < 1e-12));
        s21.validate().unwrap();

        let skew = CliffordTorus::with_radii_unchecked(vec![
            TorusFactor {
                dim: 1,
                radius: 0.9,
            },
            TorusFactor {
                dim: 1,
                radius: (1.0_f64 - 0.81).sqrt(),
            },
        ]);
        let c = skew.minimality_certificate();
        assert!(!c.pass);
        assert!((c.factor_eigenvalues[0] - 1.0 / 0.81).abs() < 1e-12);
        let inst = MinimalInstance::Torus(skew);
        assert!(matches!(
            sample_minimal_instance(&inst, 10, SeedStream::default()),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn submersion_samples() {
        let sub = ProductSubmersion::new(3, 0.7).unwrap();
        let count = 200_000;
        let s = SeedStream::new(ROOT, 5);
        let samples = sample_submersion_total_space(&sub, count, s);
        let mut sums = [0.0; 4];
        let mut angle_sum = 0.0;
        for (p, a) in &samples {
            assert!((0.0..2.0 * PI).contains(a));
            assert!(std::ptr::eq(sub.project(p, *a), p));
            sums.iter_mut().zip(p.coords()).for_each(|(s, x)| *s += x);
            angle_sum += a;
        }
        let root_n = (count as f64).sqrt();
        assert!(sums.iter().all(|s| (s / count as f64).abs() < 4.0 / root_n));
        let angle_sd = 2.0 * PI / 12.0_f64.sqrt();
        assert!((angle_sum / count as f64 - PI).abs() < 4.0 * angle_sd / root_n);

        let other = ProductSubmersion::new(3, 40.0).unwrap();
        let again = sample_submersion_total_space(&other, count, s);
        assert_eq!(samples, again);
        let vol = sub.total_volume().unwrap();
        assert!((vol - 2.0 * PI * PI * 2.0 * PI * 0.7).abs() < 1e-10);
        assert!(ProductSubmersion::new(3, 0.0).is_err());
        assert!(ProductSubmersion::new(0, 1.0).is_err());
    }
}
