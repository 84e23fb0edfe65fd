//! Log-gamma, the regularized incomplete beta function and an adaptive
//! Gauss–Kronrod quadrature used as an independent oracle.

use crate::{Error, Real, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn log_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("x", x, "x > 0"));
    }
    if x < T::half() {
        // Γ(x) = Γ(x + 1) / x keeps the series on its accurate side.
        return Ok(lanczos_ln_gamma(x + T::one()) - x.ln());
    }
    Ok(lanczos_ln_gamma(x))
}

fn lanczos_ln_gamma<T: Real>(x: T) -> T {
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_count(i));
    }
    let t = z + T::lit(LANCZOS_G) + T::half();
    T::half() * (T::two() * T::PI()).ln() + (z + T::half()) * t.ln() - t + acc.ln()
}

/// `ln B(a, b)`.
pub fn log_beta<T: Real>(a: T, b: T) -> Result<T> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta<T: Real>(x: T, a: T, b: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::domain("x", x, "0 <= x <= 1"));
    }
    Ok(inc_beta_pair(x, T::one() - x, a, b)?.0)
}

/// Returns `(I_x(a, b), 1 − I_x(a, b))` given `x` and its complement
/// `y = 1 − x` computed independently by the caller.
///
/// Passing `y` separately lets callers such as the strip and cap fractions
/// supply `cos² ε` exactly instead of forming `1 − sin² ε`, so that both tails
/// keep full relative precision.
pub(crate) fn inc_beta_pair<T: Real>(x: T, y: T, a: T, b: T) -> Result<(T, T)> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::domain("a", a, "a > 0"));
    }
    if !(b > T::zero()) || !b.is_finite() {
        return Err(Error::domain("b", b, "b > 0"));
    }
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::domain("x", x, "0 <= x <= 1"));
    }
    if x == T::zero() || y == T::one() {
        return Ok((T::zero(), T::one()));
    }
    if y == T::zero() || x == T::one() {
        return Ok((T::one(), T::zero()));
    }

    let ln_front = a * x.ln() + b * y.ln() - log_beta(a, b)?;
    let front = ln_front.exp();
    let two = T::two();
    if x < (a + T::one()) / (a + b + two) {
        let lower = front * beta_cf(x, a, b)? / a;
        Ok((lower, T::one() - lower))
    } else {
        let upper = front * beta_cf(y, b, a)? / b;
        Ok((T::one() - upper, upper))
    }
}

const BETA_CF_MAX_ITER: usize = 10_000;

/// Continued fraction for the incomplete beta function, evaluated with the
/// modified Lentz method.
fn beta_cf<T: Real>(x: T, a: T, b: T) -> Result<T> {
    let one = T::one();
    let two = T::two();
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let clamp = |v: T| if v.abs() < tiny { tiny } else { v };

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = (one - qab * x / qap).recip();
    d = clamp(d.recip()).recip();
    let mut h = d;

    for i in 1..=BETA_CF_MAX_ITER {
        let m = T::from_count(i);
        let m2 = two * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = clamp(one + aa * d).recip();
        c = clamp(one + aa / c);
        h = h * d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = clamp(one + aa * d).recip();
        c = clamp(one + aa / c);
        let delta = d * c;
        h = h * delta;

        if (delta - one).abs() <= eps {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        what: "incomplete beta continued fraction",
        iterations: BETA_CF_MAX_ITER,
    })
}

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub absolute_tolerance: T,
    pub max_recursion_depth: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            absolute_tolerance: T::lit(1e-12),
            max_recursion_depth: 60,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(absolute_tolerance: T, max_recursion_depth: usize) -> Result<Self> {
        let spec = Self {
            absolute_tolerance,
            max_recursion_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.absolute_tolerance > T::zero()) {
            return Err(Error::domain(
                "absolute_tolerance",
                self.absolute_tolerance,
                "absolute_tolerance > 0",
            ));
        }
        if self.max_recursion_depth == 0 {
            return Err(Error::domain(
                "max_recursion_depth",
                0,
                "max_recursion_depth >= 1",
            ));
        }
        Ok(())
    }
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const GK15_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const GK15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Adaptive quadrature of `f` over `[lo, hi]`.
///
/// Each panel is integrated with the 15-point Kronrod rule and its embedded
/// 7-point Gauss rule; the difference of the two is the panel's error
/// estimate. Panels whose estimate exceeds their share of the tolerance are
/// bisected, up to `spec.max_recursion_depth` levels.
pub fn integrate<T, F>(f: F, lo: T, hi: T, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    spec.validate()?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(
            "interval",
            format!("[{lo}, {hi}]"),
            "finite bounds",
        ));
    }
    if lo > hi {
        return Err(Error::domain(
            "interval",
            format!("[{lo}, {hi}]"),
            "lo <= hi",
        ));
    }
    if lo == hi {
        return Ok(T::zero());
    }
    let value = panel(
        &f,
        lo,
        hi,
        spec.absolute_tolerance,
        spec.max_recursion_depth,
    )?;
    if !value.is_finite() {
        return Err(Error::domain("integrand", value, "finite on [lo, hi]"));
    }
    Ok(value)
}

fn panel<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T, tol: T, depth: usize) -> Result<T> {
    let (kronrod, gauss) = gk15(f, lo, hi);
    let err = (kronrod - gauss).abs();
    let roundoff = T::lit(50.0) * T::epsilon() * kronrod.abs();
    if err <= tol || err <= roundoff || !err.is_finite() {
        return Ok(kronrod);
    }
    if depth == 0 {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            iterations: 0,
        });
    }
    let mid = (lo + hi) * T::half();
    let half_tol = tol * T::half();
    Ok(panel(f, lo, mid, half_tol, depth - 1)? + panel(f, mid, hi, half_tol, depth - 1)?)
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> (T, T) {
    let center = (lo + hi) * T::half();
    let half = (hi - lo) * T::half();
    let fc = f(center);
    let mut kronrod = fc * T::lit(GK15_WEIGHTS[7]);
    let mut gauss = fc * T::lit(G7_WEIGHTS[3]);
    for j in 0..7 {
        let dx = half * T::lit(GK15_NODES[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(GK15_WEIGHTS[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(G7_WEIGHTS[j / 2]);
        }
    }
    (kronrod * half, gauss * half)
}
