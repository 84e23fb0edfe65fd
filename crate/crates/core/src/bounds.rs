//! Closed-form lower bounds for the volume of equatorial strips and
//! fattenings, and a report comparing them with exact fractions.
//!
//! Every evaluator returns the raw formula value, which may be negative when
//! the bound is vacuous. Only [`bound_report`] clamps at zero.

use crate::sphere::{cap_fraction, check_epsilon, strip_fraction};
use crate::{Error, Real, Result};

/// The `δ` at which the Main II prefactor `√(1/(1 − 2δ))` equals 4.
pub fn delta_zero<T: Real>() -> T {
    T::lit(15.0 / 32.0)
}

fn check_closed_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon >= T::zero() && epsilon <= T::FRAC_PI_2()) {
        return Err(Error::domain("epsilon", epsilon, "epsilon in [0, pi/2]"));
    }
    Ok(())
}

fn check_nonnegative<T: Real>(name: &'static str, v: T) -> Result<()> {
    if !(v >= T::zero()) || !v.is_finite() {
        return Err(Error::domain(name, v, "finite and >= 0"));
    }
    Ok(())
}

fn check_positive<T: Real>(name: &'static str, v: T, constraint: &'static str) -> Result<()> {
    if !(v > T::zero()) || !v.is_finite() {
        return Err(Error::domain(name, v, constraint));
    }
    Ok(())
}

fn check_dim(name: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(name, n, ">= 1"));
    }
    Ok(())
}

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta >= T::zero() && delta < T::half()) {
        return Err(Error::domain("delta", delta, "delta in [0, 1/2)"));
    }
    Ok(())
}

/// Lower bound `1 − √(π/8) e^{−ε²(n−1)/2}` for the normalized volume of the
/// ε-fattening of any set of at least half the volume of `S^n`.
pub fn fattening_bound<T: Real>(n: usize, epsilon: T) -> Result<T> {
    check_dim("n", n)?;
    check_closed_epsilon(epsilon)?;
    let prefactor = (T::PI() / T::lit(8.0)).sqrt();
    Ok(T::one() - prefactor * gaussian_decay(n, epsilon))
}

/// Lower bound `1 − √(π/2) e^{−ε²(n−1)/2}` for the strip fraction.
pub fn equator_bound<T: Real>(n: usize, epsilon: T) -> Result<T> {
    check_dim("n", n)?;
    check_epsilon(epsilon)?;
    let prefactor = T::FRAC_PI_2().sqrt();
    Ok(T::one() - prefactor * gaussian_decay(n, epsilon))
}

fn gaussian_decay<T: Real>(n: usize, epsilon: T) -> T {
    (-epsilon * epsilon * T::from_count(n - 1) * T::half()).exp()
}

/// Lower bound `1 − 4 e^{−δ sin²ε (n+1)}` from concentration of `cos r_p`
/// about its mean. `δ` is the unnamed absolute constant of that result and
/// must be supplied.
pub fn mean_concentration_bound<T: Real>(n: usize, epsilon: T, delta: T) -> Result<T> {
    check_dim("n", n)?;
    check_epsilon(epsilon)?;
    check_positive("delta", delta, "delta > 0")?;
    let s = epsilon.sin();
    Ok(T::one() - T::lit(4.0) * (-delta * s * s * T::from_count(n + 1)).exp())
}

/// Main I: `1 − 1/((m+1) sin²ε)` for an `m`-dimensional closed minimal
/// submanifold.
pub fn main1_bound<T: Real>(m: usize, epsilon: T) -> Result<T> {
    check_dim("m", m)?;
    check_epsilon(epsilon)?;
    let s = epsilon.sin();
    Ok(T::one() - (T::from_count(m + 1) * s * s).recip())
}

/// Main II: `1 − √(1/(1−2δ)) e^{−δ sin²ε (m+1)}` for `δ ∈ [0, 1/2)`.
pub fn main2_bound<T: Real>(m: usize, epsilon: T, delta: T) -> Result<T> {
    check_dim("m", m)?;
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    let s = epsilon.sin();
    let prefactor = (T::one() - T::two() * delta).recip().sqrt();
    Ok(T::one() - prefactor * (-delta * s * s * T::from_count(m + 1)).exp())
}

/// The `δ ∈ [0, 1/2)` maximizing [`main2_bound`]:
/// `max(0, (1 − 1/(sin²ε (m+1)))/2)`.
pub fn main2_best_delta<T: Real>(m: usize, epsilon: T) -> Result<T> {
    check_dim("m", m)?;
    check_epsilon(epsilon)?;
    let s = epsilon.sin();
    let scale = s * s * T::from_count(m + 1);
    Ok((T::half() * (T::one() - scale.recip())).max(T::zero()))
}

/// Eigenvalue-based fattening bound `1 − (1−a²) e^{−ε √λ₁ ln(1+a)}` for a
/// domain of volume fraction `a` in a manifold with first eigenvalue `λ₁`.
pub fn eigenvalue_bound<T: Real>(epsilon: T, lambda1: T, a: T) -> Result<T> {
    check_nonnegative("epsilon", epsilon)?;
    check_positive("lambda1", lambda1, "lambda1 > 0")?;
    if !(a > T::zero() && a <= T::one()) {
        return Err(Error::domain("a", a, "a in (0, 1]"));
    }
    Ok(T::one() - (T::one() - a * a) * (-epsilon * lambda1.sqrt() * a.ln_1p()).exp())
}

/// Conditional fattening bound `1 − c₁ e^{−c₂ ε √(n−1)}` for minimal
/// hypersurfaces with `λ₁` of order `n − 1`.
pub fn yau_bound<T: Real>(n: usize, epsilon: T, c1: T, c2: T) -> Result<T> {
    if n < 2 {
        return Err(Error::domain("n", n, "n >= 2"));
    }
    check_nonnegative("epsilon", epsilon)?;
    check_positive("c1", c1, "c1 > 0")?;
    check_positive("c2", c2, "c2 > 0")?;
    Ok(T::one() - c1 * (-c2 * epsilon * T::from_count(n - 1).sqrt()).exp())
}

/// Parameters of the bounds that are not determined by `(n, ε)`.
///
/// `lambda1`/`a` and `c1`/`c2` have no defaults; the corresponding bounds are
/// only reported when both members of the pair are present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams<T> {
    pub delta: T,
    pub lambda1: Option<T>,
    pub a: Option<T>,
    pub c1: Option<T>,
    pub c2: Option<T>,
}

impl<T: Real> BoundParams<T> {
    pub fn new(delta: T) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self {
            delta,
            lambda1: None,
            a: None,
            c1: None,
            c2: None,
        })
    }

    pub fn with_eigenvalue(mut self, lambda1: T, a: T) -> Result<Self> {
        check_positive("lambda1", lambda1, "lambda1 > 0")?;
        if !(a > T::zero() && a <= T::one()) {
            return Err(Error::domain("a", a, "a in (0, 1]"));
        }
        self.lambda1 = Some(lambda1);
        self.a = Some(a);
        Ok(self)
    }

    pub fn with_yau_constants(mut self, c1: T, c2: T) -> Result<Self> {
        check_positive("c1", c1, "c1 > 0")?;
        check_positive("c2", c2, "c2 > 0")?;
        self.c1 = Some(c1);
        self.c2 = Some(c2);
        Ok(self)
    }
}

/// One bound evaluated against the exact fraction it bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue<T> {
    pub name: &'static str,
    /// The `δ` used, for the `δ`-parametric bounds.
    pub delta: Option<T>,
    /// Raw formula value.
    pub value: T,
    /// The exact normalized volume this bound is compared with.
    pub reference: T,
    /// `reference − max(0, value)`.
    pub slack: T,
    /// Whether a theorem guarantees `slack >= 0` for this entry.
    pub guaranteed: bool,
}

impl<T: Real> BoundValue<T> {
    pub fn clamped(&self) -> T {
        self.value.max(T::zero())
    }
}

/// Exact strip and fattening fractions on `S^n` next to every bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub dimension: usize,
    pub epsilon: T,
    /// `vol(Ω(p, ε)) / vol(S^n)`.
    pub exact_fraction: T,
    /// Normalized volume of the ε-fattening of a hemisphere.
    pub hemisphere_fattening: T,
    pub bound_values: Vec<BoundValue<T>>,
}

impl<T: Real> BoundReport<T> {
    pub fn get(&self, name: &str) -> Option<&BoundValue<T>> {
        self.bound_values.iter().find(|b| b.name == name)
    }

    /// Smallest slack over the theorem-backed entries.
    pub fn min_guaranteed_slack(&self) -> T {
        self.bound_values
            .iter()
            .filter(|b| b.guaranteed)
            .map(|b| b.slack)
            .fold(T::infinity(), T::min)
    }

    /// Theorem-backed entries whose slack is below `-tol`.
    pub fn violations(&self, tol: T) -> Vec<&BoundValue<T>> {
        self.bound_values
            .iter()
            .filter(|b| b.guaranteed && b.slack < -tol)
            .collect()
    }
}

/// Evaluates the strip fraction of `S^n` and every bound at `(n, ε)`.
///
/// Main I and Main II are taken at `m = n`, i.e. for the identity immersion
/// of `S^n` into itself. The fattening, eigenvalue and Yau bounds are compared
/// with the fattening of a hemisphere.
pub fn bound_report<T: Real>(
    n: usize,
    epsilon: T,
    params: &BoundParams<T>,
) -> Result<BoundReport<T>> {
    check_delta(params.delta)?;
    let exact = strip_fraction(n, epsilon)?;
    let hemisphere = cap_fraction(n, T::FRAC_PI_2() + epsilon)?;

    let mut values = Vec::new();
    let mut push = |name, delta, value: T, reference: T, guaranteed| {
        values.push(BoundValue {
            name,
            delta,
            value,
            reference,
            slack: reference - value.max(T::zero()),
            guaranteed,
        });
    };

    push(
        "fattening",
        None,
        fattening_bound(n, epsilon)?,
        hemisphere,
        true,
    );
    push("equator", None, equator_bound(n, epsilon)?, exact, true);
    if params.delta > T::zero() {
        // For δ ≤ 15/32 the prefactor 4 dominates √(1/(1−2δ)), so the bound
        // follows from Main II.
        push(
            "mean_concentration",
            Some(params.delta),
            mean_concentration_bound(n, epsilon, params.delta)?,
            exact,
            params.delta <= delta_zero(),
        );
    }
    push("main1", None, main1_bound(n, epsilon)?, exact, true);
    push(
        "main2",
        Some(params.delta),
        main2_bound(n, epsilon, params.delta)?,
        exact,
        true,
    );
    let best = main2_best_delta(n, epsilon)?;
    push(
        "main2_best",
        Some(best),
        main2_bound(n, epsilon, best)?,
        exact,
        true,
    );
    if let (Some(lambda1), Some(a)) = (params.lambda1, params.a) {
        push(
            "eigenvalue",
            None,
            eigenvalue_bound(epsilon, lambda1, a)?,
            hemisphere,
            false,
        );
    }
    if let (Some(c1), Some(c2)) = (params.c1, params.c2) {
        if n >= 2 {
            push(
                "yau",
                None,
                yau_bound(n, epsilon, c1, c2)?,
                hemisphere,
                false,
            );
        }
    }

    Ok(BoundReport {
        dimension: n,
        epsilon,
        exact_fraction: exact,
        hemisphere_fattening: hemisphere,
        bound_values: values,
    })
}
