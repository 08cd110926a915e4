//! The two scalar kernels behind the sharp bounds, plus two helper functions
//! used to reason about their shape.
//!
//! For a weight parameter `alpha` in `(0, 1/2]`, both kernels live on
//! `[0, 1/alpha]`, vanish at the endpoints, equal 1 at `x = 1`, increase on
//! `[0, 1]`, and decrease on `[1, 1/alpha]`:
//!
//! * `f(x) = x^alpha * ((1 - alpha x) / (1 - alpha))^(1 - alpha)` is the
//!   geometric mean of the extremal two-valued sample with arithmetic mean 1,
//! * `phi^2(x) = x (1 - alpha x) / ((1 - 2 alpha) x + alpha)` is its harmonic
//!   mean.
//!
//! `f >= phi` on `[0, 1]` and `f <= phi` on `[1, 1/alpha]`, with `f / phi`
//! strictly decreasing; that ordering is what makes the interval endpoints in
//! [`crate::bounds`] sharp rather than merely valid.

use crate::error::{Error, Result};
use crate::math;

/// A validated kernel parameter: the smallest weight of the sample,
/// constrained to `(0, 1/2]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct KernelParam {
    alpha: f64,
}

impl KernelParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite {
                what: "alpha",
                value: alpha,
            });
        }
        if alpha <= 0.0 {
            return Err(Error::NonPositive {
                what: "alpha",
                value: alpha,
            });
        }
        if alpha < f64::MIN_POSITIVE {
            // 1/alpha would overflow for subnormal alpha.
            return Err(Error::OutOfRange {
                what: "alpha is subnormal",
            });
        }
        if alpha > 0.5 {
            return Err(Error::AlphaRange { alpha, max: 0.5 });
        }
        Ok(KernelParam { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Right end of the kernel domain, `1/alpha`.
    pub fn upper_limit(&self) -> f64 {
        1.0 / self.alpha
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite { what: "x", value: x });
        }
        let limit = self.upper_limit();
        if x < 0.0 || x > limit {
            return Err(Error::DomainX { x, limit });
        }
        Ok(())
    }

    /// The geometric kernel `f`.
    pub fn f_kernel(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(f_eval(self.alpha, x))
    }

    /// The harmonic kernel `phi^2`.
    pub fn phi_squared(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(phi2_eval(self.alpha, x))
    }
}

/// Unchecked `f`; evaluated in log space so `x^alpha` never underflows for
/// tiny `x` with small `alpha`. Exact 1 at `x = 1` because both logs cancel.
pub(crate) fn f_eval(alpha: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let m = 1.0 - alpha * x;
    if m <= 0.0 {
        return 0.0;
    }
    let one_minus = 1.0 - alpha;
    math::exp(alpha * math::ln(x) + (1.0 - alpha) * (math::ln(m) - math::ln(one_minus)))
}

/// Unchecked `phi^2`. The denominator stays in `[alpha, 1 - alpha]` scaled by
/// `x`, so the expression is stable on the whole domain.
pub(crate) fn phi2_eval(alpha: f64, x: f64) -> f64 {
    let m = (1.0 - alpha * x).max(0.0);
    x * m / ((1.0 - 2.0 * alpha) * x + alpha)
}

/// `f` from a root and its separately solved complement `m = 1 - alpha x`.
///
/// Near the right end of the domain `m` vanishes while `x` stays order one,
/// so a fresh subtraction would cost `eps / m` in relative terms; taking the
/// solver's `m` keeps every factor relatively accurate.
pub(crate) fn f_eval_parts(alpha: f64, x: f64, m: f64) -> f64 {
    if x <= 0.0 || m <= 0.0 {
        return 0.0;
    }
    math::exp(alpha * math::ln(x) + (1.0 - alpha) * (math::ln(m) - math::ln_1p(-alpha)))
}

/// `phi^2` from a root and its separately solved complement, for the same
/// reason as [`f_eval_parts`].
pub(crate) fn phi2_eval_parts(alpha: f64, x: f64, m: f64) -> f64 {
    if x <= 0.0 || m <= 0.0 {
        return 0.0;
    }
    x * m / ((1.0 - 2.0 * alpha) * x + alpha)
}

/// `s(t) = 2t/(2 - t) + ln(1 - t)` for `t < 1`.
///
/// Decreasing, `s(0) = 0`, and `s(t) ~ -t^3/12` near 0. The closed form loses
/// all relative accuracy near 0 (two `O(t)` terms cancel to `O(t^3)`), so
/// small arguments are summed by series instead.
pub fn s_function(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "t", value: t });
    }
    if t >= 1.0 {
        return Err(Error::DomainT { t });
    }
    if math::abs(t) <= 0.25 {
        // s(t) = sum_{k>=3} t^k (2k - 2^k) / (k 2^k); terms shrink at least
        // geometrically with ratio |t| once 2^k dominates.
        let mut acc = 0.0;
        let mut tk = t * t * t;
        let mut pow2 = 8.0;
        for k in 3..60u32 {
            let kf = k as f64;
            let term = tk * (2.0 * kf - pow2) / (kf * pow2);
            acc += term;
            if math::abs(term) <= 1e-20 * math::abs(acc) {
                break;
            }
            tk *= t;
            pow2 *= 2.0;
        }
        return Ok(acc);
    }
    Ok(2.0 * t / (2.0 - t) + math::ln_1p(-t))
}

/// Sign certificate for the kernel comparison: positive where `f < phi`,
/// negative where `f > phi`, zero at `x = 1`.
///
/// Defined for `alpha` in `(0, 1)` and `x` in `[0, 1/alpha]`; the closure
/// values at the ends are `-inf` and `+inf`. Algebraically this equals
/// `s((1 - x) / (1 - alpha x))`, which unit tests cross-check.
pub fn gamma_sign(x: f64, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::BadRequest {
            what: "gamma_sign needs alpha in (0, 1)",
        });
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "x", value: x });
    }
    let limit = 1.0 / alpha;
    if x < 0.0 || x > limit {
        return Err(Error::DomainX { x, limit });
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let d = 1.0 - alpha * x;
    if d <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let t = (1.0 - x) / d;
    let one_minus_x = 1.0 - x;
    let rational = one_minus_x * one_minus_x / (d * (1.0 + (1.0 - 2.0 * alpha) * x));
    Ok(t + math::ln_1p(-t) + rational)
}
