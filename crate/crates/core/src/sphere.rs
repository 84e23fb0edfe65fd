//! Intrinsic geometry of the unit sphere `S^n(1) ⊂ R^{n+1}`.

use crate::special::{inc_beta_pair, log_gamma};
use crate::{Error, Real, Result};

/// Tolerance on `|‖x‖ − 1|` for a point to count as lying on the sphere.
pub fn unit_norm_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::lit(64.0) * T::epsilon())
}

/// A point of `S^n(1)` stored by its `n + 1` ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    coords: Vec<T>,
}

impl<T: Real> SpherePoint<T> {
    /// Wraps coordinates that already have unit norm.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain(
                "coordinates",
                coords.len(),
                "at least 2 coordinates (n >= 1)",
            ));
        }
        let norm = norm(&coords);
        if !((norm - T::one()).abs() <= unit_norm_tolerance::<T>()) {
            return Err(Error::domain("norm", norm, "unit norm"));
        }
        Ok(Self { coords })
    }

    /// Wraps coordinates the caller has just normalized.
    pub(crate) fn from_unit_unchecked(coords: Vec<T>) -> Self {
        debug_assert!((norm(&coords) - T::one()).abs() <= unit_norm_tolerance::<T>());
        Self { coords }
    }

    /// Projects a non-zero vector radially onto the sphere.
    pub fn normalized(mut coords: Vec<T>) -> Result<Self> {
        let norm = norm(&coords);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::domain("norm", norm, "non-zero finite vector"));
        }
        coords.iter_mut().for_each(|c| *c = *c / norm);
        Self::new(coords)
    }

    /// The `k`-th coordinate axis of `R^{n+1}` as a point of `S^n`.
    pub fn axis(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::domain("axis", k, "axis index <= n"));
        }
        let mut coords = vec![T::zero(); n + 1];
        coords[k] = T::one();
        Self::new(coords)
    }

    /// The sphere dimension `n` (one less than the number of coordinates).
    pub fn ambient_dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    /// `⟨p, q⟩`, which is `cos` of the distance between the two points.
    pub fn dot(&self, other: &Self) -> Result<T> {
        check_same_dimension(self, other)?;
        Ok(dot(&self.coords, &other.coords))
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Real>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

fn check_same_dimension<T>(p: &SpherePoint<T>, q: &SpherePoint<T>) -> Result<()> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::DimensionMismatch {
            expected: p.coords.len() - 1,
            found: q.coords.len() - 1,
        });
    }
    Ok(())
}

/// The strip `Ω(p, ε)` of points at distance in `(π/2 − ε, π/2 + ε)` from
/// `p`, around the equator `E(p) = {q : ⟨p, q⟩ = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorStrip<T> {
    center: SpherePoint<T>,
    epsilon: T,
}

impl<T: Real> EquatorStrip<T> {
    pub fn new(center: SpherePoint<T>, epsilon: T) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { center, epsilon })
    }

    pub fn center(&self) -> &SpherePoint<T> {
        &self.center
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// `ε̄ = sin ε`, the half-width of the strip measured in `cos r_p`.
    pub fn eps_bar(&self) -> T {
        self.epsilon.sin()
    }

    /// Strict membership `|⟨p, q⟩| < sin ε`.
    pub fn contains(&self, q: &SpherePoint<T>) -> Result<bool> {
        Ok(self.center.dot(q)?.abs() < self.eps_bar())
    }

    pub fn on_equator(&self, q: &SpherePoint<T>, tol: T) -> Result<bool> {
        Ok(self.center.dot(q)?.abs() <= tol)
    }

    /// Normalized volume of the strip; does not depend on the center.
    pub fn volume_fraction(&self) -> Result<T> {
        strip_fraction(self.center.ambient_dimension(), self.epsilon)
    }
}

pub(crate) fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon < T::FRAC_PI_2()) {
        return Err(Error::domain("epsilon", epsilon, "epsilon in (0, pi/2)"));
    }
    Ok(())
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n", n, "n >= 1"));
    }
    Ok(())
}

/// `vol(S^n(1)) = 2 π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn sphere_surface_volume<T: Real>(n: usize) -> Result<T> {
    check_dimension(n)?;
    let half = T::from_count(n + 1) * T::half();
    Ok(T::two() * (half * T::PI().ln() - log_gamma(half)?).exp())
}

/// Normalized volume of the geodesic ball of radius `r` in `S^n`.
pub fn cap_fraction<T: Real>(n: usize, r: T) -> Result<T> {
    check_dimension(n)?;
    if !(r >= T::zero() && r <= T::PI()) {
        return Err(Error::domain("r", r, "r in [0, pi]"));
    }
    let (small_r, flip) = if r <= T::FRAC_PI_2() {
        (r, false)
    } else {
        (T::PI() - r, true)
    };
    let (s, c) = small_r.sin_cos();
    let (inc, _) = inc_beta_pair(s * s, c * c, T::from_count(n) * T::half(), T::half())?;
    let cap = T::half() * inc;
    Ok(if flip { T::one() - cap } else { cap })
}

/// Normalized volume of `Ω(p, ε)` in `S^n`, i.e. `I_{sin² ε}(1/2, n/2)`.
pub fn strip_fraction<T: Real>(n: usize, epsilon: T) -> Result<T> {
    check_dimension(n)?;
    check_epsilon(epsilon)?;
    let (s, c) = epsilon.sin_cos();
    Ok(strip_pair(n, s * s, c * c)?.0)
}

/// `1 − strip_fraction(n, ε)` evaluated directly, so it keeps its relative
/// precision where the strip fraction itself rounds to 1.
pub fn strip_complement<T: Real>(n: usize, epsilon: T) -> Result<T> {
    check_dimension(n)?;
    check_epsilon(epsilon)?;
    let (s, c) = epsilon.sin_cos();
    Ok(strip_pair(n, s * s, c * c)?.1)
}

/// Probability that the first coordinate of a uniform point of `S^n` has
/// absolute value below `threshold`; equals `strip_fraction(n, asin t)`.
/// Thresholds at or above 1 give 1.
pub fn strip_fraction_from_sine<T: Real>(n: usize, threshold: T) -> Result<T> {
    check_dimension(n)?;
    if !(threshold >= T::zero()) {
        return Err(Error::domain("threshold", threshold, "threshold >= 0"));
    }
    if threshold >= T::one() {
        return Ok(T::one());
    }
    let t = threshold;
    Ok(strip_pair(n, t * t, (T::one() - t) * (T::one() + t))?.0)
}

fn strip_pair<T: Real>(n: usize, sin2: T, cos2: T) -> Result<(T, T)> {
    inc_beta_pair(sin2, cos2, T::half(), T::from_count(n) * T::half())
}

/// Intrinsic distance `arccos ⟨p, q⟩` with the inner product clamped to
/// `[−1, 1]`.
pub fn extrinsic_distance<T: Real>(p: &SpherePoint<T>, q: &SpherePoint<T>) -> Result<T> {
    let c = p.dot(q)?;
    Ok(c.max(-T::one()).min(T::one()).acos())
}
