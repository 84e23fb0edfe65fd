//! Normalized even cosine moments on `S^m`, their generating function and
//! its closed-form bound.
//!
//! `M_k(m)` is the average of `cos^{2k}` of the distance to a fixed point
//! over `S^m(1)`. It satisfies `M_0 = 1` and
//! `M_{k+1} = (2k+1)/(m+2k+1) · M_k`, which is evaluated multiplicatively in
//! whatever field `T` is chosen; with an exact rational type the table is
//! exact.

use num_traits::{FromPrimitive, Num};

use crate::sphere::check_epsilon;
use crate::{Error, Real, Result};

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("m", m, "m >= 1"));
    }
    Ok(())
}

fn ratio<T: Num + FromPrimitive>(m: usize, k: usize) -> T {
    let num = T::from_usize(2 * k + 1).expect("representable");
    let den = T::from_usize(m + 2 * k + 1).expect("representable");
    num / den
}

/// `M_k(m)`.
pub fn cos_moment<T: Num + Clone + FromPrimitive>(m: usize, k: usize) -> Result<T> {
    check_m(m)?;
    Ok((0..k).fold(T::one(), |acc, j| acc * ratio::<T>(m, j)))
}

/// `M_0(m), …, M_K(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable<T> {
    m: usize,
    values: Vec<T>,
}

impl<T: Num + Clone + FromPrimitive> MomentTable<T> {
    pub fn build(m: usize, max_k: usize) -> Result<Self> {
        check_m(m)?;
        let mut values = Vec::with_capacity(max_k + 1);
        values.push(T::one());
        for k in 0..max_k {
            let next = values[k].clone() * ratio::<T>(m, k);
            values.push(next);
        }
        Ok(Self { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<&T> {
        self.values.get(k)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

pub const DEFAULT_MGF_TERM_CAP: usize = 10_000;

/// `F(t) = Σ_k t^k M_k(m) / k!`, the average of `e^{t cos² r}` over `S^m`.
///
/// Summation stops once a term falls below `tol` times the partial sum.
pub fn cos_mgf<T: Real>(m: usize, t: T, tol: T) -> Result<T> {
    cos_mgf_with_cap(m, t, tol, DEFAULT_MGF_TERM_CAP)
}

pub fn cos_mgf_with_cap<T: Real>(m: usize, t: T, tol: T, cap: usize) -> Result<T> {
    check_m(m)?;
    if !t.is_finite() {
        return Err(Error::domain("t", t, "finite t"));
    }
    if !(tol > T::zero()) {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..cap {
        // t^{k+1} M_{k+1} / (k+1)! from t^k M_k / k!.
        term = term * t * ratio::<T>(m, k) / T::from_count(k + 1);
        sum = sum + term;
        if term.abs() < tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "cosine moment generating series",
        iterations: cap,
    })
}

/// `√((m+1)/(m+1−2t))`, the upper bound on [`cos_mgf`] for `0 < t < (m+1)/2`.
pub fn mgf_bound<T: Real>(m: usize, t: T) -> Result<T> {
    check_m(m)?;
    let m1 = T::from_count(m + 1);
    if !(t > T::zero() && t < m1 * T::half()) {
        return Err(Error::domain("t", t, "0 < t < (m+1)/2"));
    }
    Ok((m1 / (m1 - T::two() * t)).sqrt())
}

/// Main II rebuilt from its proof chain: `1 − e^{−t sin²ε} · mgf_bound(m, t)`
/// with `t = δ(m+1)`.
pub fn main2_via_moment_chain<T: Real>(m: usize, epsilon: T, delta: T) -> Result<T> {
    check_m(m)?;
    check_epsilon(epsilon)?;
    if !(delta >= T::zero() && delta < T::half()) {
        return Err(Error::domain("delta", delta, "delta in [0, 1/2)"));
    }
    if delta == T::zero() {
        return Ok(T::zero());
    }
    let t = delta * T::from_count(m + 1);
    let s = epsilon.sin();
    Ok(T::one() - (-t * s * s).exp() * mgf_bound(m, t)?)
}

/// The sharper intermediate bound `1 − e^{−t sin²ε} F(t)` using the exact
/// generating function instead of its closed-form bound.
pub fn series_chain_bound<T: Real>(m: usize, epsilon: T, t: T, tol: T) -> Result<T> {
    check_epsilon(epsilon)?;
    if !(t >= T::zero()) {
        return Err(Error::domain("t", t, "t >= 0"));
    }
    let s = epsilon.sin();
    Ok(T::one() - (-t * s * s).exp() * cos_mgf(m, t, tol)?)
}

/// Outcome of comparing one empirical moment with `M_k(m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentVerdict {
    pub k: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub sphere_moment: f64,
    pub pass: bool,
}

/// Number of standard errors allowed above `M_k(m)`.
pub const DOMINATION_SIGMAS: f64 = 4.0;

/// Checks `estimate_k ≤ M_k(m) + 4·stderr_k` for `k = 0, 1, …`.
pub fn moment_domination_check(
    empirical_moments: &[(f64, f64)],
    m: usize,
) -> Result<Vec<MomentVerdict>> {
    check_m(m)?;
    if empirical_moments.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let table = MomentTable::<f64>::build(m, empirical_moments.len() - 1)?;
    Ok(empirical_moments
        .iter()
        .zip(table.values())
        .enumerate()
        .map(|(k, (&(estimate, stderr), &sphere_moment))| MomentVerdict {
            k,
            estimate,
            stderr,
            sphere_moment,
            pass: estimate <= sphere_moment + DOMINATION_SIGMAS * stderr,
        })
        .collect())
}
