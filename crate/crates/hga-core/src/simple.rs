//! Closed-form bounds that avoid solving the kernel equations.
//!
//! These are strict, slightly looser versions of the sharp bounds in
//! [`crate::bounds`]: each comes from evaluating the kernels at an explicit
//! near-extremal point instead of at the exact root. They cost one `exp` and
//! never fail to bracket the sharp interval, which makes them useful as quick
//! sanity bounds and as the basis for the matrix and polynomial applications.

use crate::error::{Error, Result};
use crate::math;
use crate::solve::{bisect_to_ulp, NormalizedProblem};

/// Strict lower bound on the harmonic mean from `(a, g)`:
/// `h > a / (alpha e (a/g)^(1/alpha) + 1)`.
///
/// If the power overflows, the bound degrades to 0, which is still valid and
/// representable, so it is returned as is.
pub fn harmonic_lower(a: f64, g: f64, alpha: f64) -> Result<f64> {
    let problem = NormalizedProblem::new(alpha, check_pair("geometric", g, "arithmetic", a)?)?;
    let q = math::exp(math::ln(alpha) + 1.0 - math::ln(problem.ratio()) / alpha);
    Ok(a / (q + 1.0))
}

/// Strict upper bound on the arithmetic mean from `(h, g)`:
/// `a < h (alpha e (g/h)^(1/alpha) + 1)`.
pub fn arithmetic_upper(h: f64, g: f64, alpha: f64) -> Result<f64> {
    let problem = NormalizedProblem::new(alpha, check_pair("harmonic", h, "geometric", g)?)?;
    let q = math::exp(math::ln(alpha) + 1.0 - math::ln(problem.ratio()) / alpha);
    let bound = h * (q + 1.0);
    if !bound.is_finite() {
        return Err(Error::OutOfRange {
            what: "upper bound overflows f64",
        });
    }
    Ok(bound)
}

fn check_pair(
    small_name: &'static str,
    small: f64,
    large_name: &'static str,
    large: f64,
) -> Result<f64> {
    for (what, v) in [(small_name, small), (large_name, large)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { what, value: v });
        }
        if v <= 0.0 {
            return Err(Error::NonPositive { what, value: v });
        }
    }
    Ok(small / large)
}

/// A two-sided closed-form bound on the geometric mean from `(h, a)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GeometricInterval {
    pub lower: f64,
    pub upper: f64,
    /// The common amplification factor `F = (h/a) exp(h/a + n/(n-1))`:
    /// `lower = h F^(-alpha)` and `upper = a F^alpha`.
    pub factor: f64,
}

/// Closed-form geometric bounds `h F^(-alpha) < g < a F^alpha` with
/// `F = (h/a) exp(h/a + n/(n-1))`.
///
/// `alpha` must be a feasible smallest weight for `n` points, i.e. in
/// `(0, 1/n]`.
pub fn geometric_interval(h: f64, a: f64, alpha: f64, n: usize) -> Result<GeometricInterval> {
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    if !alpha.is_finite() {
        return Err(Error::NonFinite {
            what: "alpha",
            value: alpha,
        });
    }
    let max = 1.0 / n as f64;
    if alpha <= 0.0 {
        return Err(Error::NonPositive {
            what: "alpha",
            value: alpha,
        });
    }
    if alpha > max {
        return Err(Error::AlphaRange { alpha, max });
    }
    // alpha <= 1/n <= 1/2 here, so the kernel-parameter validation applies.
    let problem = NormalizedProblem::new(alpha, check_pair("harmonic", h, "arithmetic", a)?)?;
    let t = problem.ratio();
    let lnf = math::ln(t) + t + n as f64 / (n as f64 - 1.0);
    Ok(GeometricInterval {
        lower: math::exp(math::ln(h) - alpha * lnf),
        upper: math::exp(math::ln(a) + alpha * lnf),
        factor: math::exp(lnf),
    })
}

/// The amplification factor `F = t exp(t + n/(n-1))` for ratio `t = h/a`.
/// The geometric interval beats the trivial `[h, a]` exactly when `F < 1`.
pub fn improvement_factor(ratio: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    if !ratio.is_finite() {
        return Err(Error::NonFinite {
            what: "mean ratio",
            value: ratio,
        });
    }
    if ratio <= 0.0 || ratio > 1.0 {
        return Err(Error::Infeasible { ratio });
    }
    Ok(ratio * math::exp(ratio + n as f64 / (n as f64 - 1.0)))
}

/// Whether the closed-form geometric interval is strictly narrower than the
/// trivial `[h, a]`.
pub fn improves_over_trivial(ratio: f64, n: usize) -> Result<bool> {
    Ok(improvement_factor(ratio, n)? < 1.0)
}

/// The limiting improvement threshold: as `n` grows, the geometric interval
/// improves on `[h, a]` exactly for ratios below this value, the root of
/// `t e^(t+1) = 1` (equivalently `W(1/e)`).
pub fn improvement_threshold() -> f64 {
    // ln t + t + 1 is increasing with a sign change inside [0.1, 0.5].
    bisect_to_ulp(0.1, 0.5, |t| math::ln(t) + t + 1.0)
}
