//! Root solvers for the two kernel equations.
//!
//! Both kernels rise from 0 to 1 on `[0, 1]` and fall back to 0 on
//! `[1, 1/alpha]`, so `kernel(x) = ratio` has exactly two roots for a ratio in
//! `(0, 1)`: `xi0 <= 1 <= xi1`. The pair of roots is what turns a known mean
//! ratio into a two-sided bound for the third mean.

use crate::error::{Error, Result};
use crate::kernels::KernelParam;
use crate::math;

/// Ratios within this distance of 1 are treated as exactly 1 (the sample must
/// be constant to rounding; both roots collapse to 1).
const DEGENERATE_TOL: f64 = 1e-12;

/// Ratios in `(1, 1 + CLAMP_TOL]` are accepted as rounding noise on a
/// degenerate input and clamped to 1; anything larger is infeasible.
const CLAMP_TOL: f64 = 1e-9;

/// Roots can only underflow if the solution sits below `exp` of this.
const MIN_EXP: f64 = -745.2;

/// The two roots of a kernel equation, `xi0` in `[0, 1]` and `xi1` in
/// `[1, 1/alpha]`, along with the complements `m = 1 - alpha * xi` of each
/// root.
///
/// The complements are not a convenience: near the right end of the domain
/// `1 - alpha * xi1` vanishes, so recomputing it from `xi1` by subtraction
/// loses relative precision without bound. The solvers obtain `m0` and `m1`
/// directly, each accurate in its own right, and the bound evaluations
/// consume them instead of re-deriving them.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RootPair {
    pub xi0: f64,
    pub xi1: f64,
    /// `1 - alpha * xi0`, relatively accurate.
    pub m0: f64,
    /// `1 - alpha * xi1`, relatively accurate.
    pub m1: f64,
}

/// A validated `(alpha, ratio)` pair with the ratio normalized into `(0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NormalizedProblem {
    param: KernelParam,
    ratio: f64,
    clamped: bool,
}

impl NormalizedProblem {
    /// `ratio` is the known mean ratio (smaller mean over larger mean).
    /// Values in `(1, 1 + 1e-9]` are clamped to 1 and flagged; values within
    /// `1e-12` of 1 are snapped to exactly 1.
    pub fn new(alpha: f64, ratio: f64) -> Result<Self> {
        let param = KernelParam::new(alpha)?;
        if !ratio.is_finite() {
            return Err(Error::NonFinite {
                what: "mean ratio",
                value: ratio,
            });
        }
        if ratio <= 0.0 || ratio > 1.0 + CLAMP_TOL {
            return Err(Error::Infeasible { ratio });
        }
        let clamped = ratio > 1.0;
        let ratio = if math::abs(ratio - 1.0) <= DEGENERATE_TOL || clamped {
            1.0
        } else {
            ratio
        };
        Ok(NormalizedProblem {
            param,
            ratio,
            clamped,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.param.alpha()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// True if the input ratio was slightly above 1 and got clamped.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// True if both roots collapse to 1 (constant sample).
    pub fn is_degenerate(&self) -> bool {
        self.ratio == 1.0
    }

    pub fn param(&self) -> KernelParam {
        self.param
    }

    /// Solve `f(xi) = ratio`.
    ///
    /// The lower root is bisected in log space: `xi0` can be as small as
    /// `ratio^(1/alpha)`, far below what a linear bracket could resolve, and
    /// for small `alpha` it may not be representable at all (reported as
    /// [`Error::OutOfRange`]).
    pub fn solve_f(&self) -> Result<RootPair> {
        let alpha = self.alpha();
        let one_minus = 1.0 - alpha;
        if self.is_degenerate() {
            return Ok(RootPair {
                xi0: 1.0,
                xi1: 1.0,
                m0: one_minus,
                m1: one_minus,
            });
        }
        let lnr = math::ln(self.ratio);
        let l1a = math::ln_1p(-alpha);

        // Bracket from x^alpha >= f(x) >= x^alpha (1-alpha)^(1-alpha) on [0,1]:
        // the root's log sits between lnr/alpha shifted by (1-alpha)ln(1-alpha)/alpha
        // and lnr/alpha.
        let y_hi = lnr / alpha;
        if y_hi < MIN_EXP {
            return Err(Error::OutOfRange {
                what: "lower root underflows f64",
            });
        }
        let y_lo = y_hi + one_minus * l1a / alpha;
        // Residual rearranged around y_lo: alpha * y_lo absorbs lnr and the
        // (1 - alpha) ln(1 - alpha) constant symbolically, so no O(1) terms
        // cancel numerically. That matters: for small alpha the root sits
        // within 1e-30 of y_lo and the naive form's rounding noise flips the
        // bracket sign there.
        let resid = |y: f64| alpha * (y - y_lo) + one_minus * math::ln_1p(-alpha * math::exp(y));
        let y = bisect_to_ulp(y_lo, y_hi, resid);
        let xi0 = math::exp(y);
        if xi0 == 0.0 {
            return Err(Error::OutOfRange {
                what: "lower root underflows f64",
            });
        }
        // xi0 <= 1, so the complement is at least 1 - alpha: well conditioned.
        let m0 = 1.0 - alpha * xi0;

        // Upper root, bisected in the log of the complement m = 1 - alpha xi.
        // On the falling branch f = ((1 - m)/alpha)^alpha (m/(1-alpha))^(1-alpha)
        // with 1 <= (1 - m)/alpha, so bounding the first factor by 1 from below
        // and by alpha^-alpha from above gives an analytic bracket for ln m.
        // The residual is anchored at z_lo the same way as above: there it
        // reduces to alpha ln(1 - m), strictly negative with no cancellation.
        let z_hi = lnr / one_minus + l1a;
        let z_lo = (lnr + alpha * math::ln(alpha)) / one_minus + l1a;
        let resid_m = |z: f64| one_minus * (z - z_lo) + alpha * math::ln_1p(-math::exp(z));
        let z = bisect_to_ulp(z_lo, z_hi, resid_m);
        let m1 = math::exp(z);

        let limit = self.param.upper_limit();
        let mut xi1 = (1.0 - m1) / alpha;
        if xi1 >= limit {
            // Keep the root strictly inside the domain so the witness sample
            // stays positive; the true root is within one ulp anyway.
            xi1 = next_down(limit);
        }
        if xi1 < 1.0 {
            xi1 = 1.0;
        }
        Ok(RootPair { xi0, xi1, m0, m1 })
    }

    /// Solve `phi^2(xi) = ratio` in closed form.
    ///
    /// The roots solve `alpha xi^2 - (1 - ratio(1 - 2 alpha)) xi + ratio alpha = 0`.
    /// The larger root uses the plus form of the quadratic formula (no
    /// cancellation), the smaller comes from the product identity
    /// `xi0 * xi1 = ratio`. The discriminant is computed in the factored form
    /// `(1 - r)(1 - r(1 - 2 alpha)^2)`, which stays accurate near `r = 1`.
    ///
    /// The complements satisfy their own quadratic,
    /// `m^2 - (1 + r(1 - 2 alpha)) m + r(1 - alpha)^2 = 0` (same discriminant),
    /// so `m0` comes from its plus form and `m1` from the product identity
    /// `m0 m1 = r (1 - alpha)^2`; neither subtracts nearly equal quantities.
    pub fn solve_phi(&self) -> Result<RootPair> {
        let alpha = self.alpha();
        let one_minus = 1.0 - alpha;
        if self.is_degenerate() {
            return Ok(RootPair {
                xi0: 1.0,
                xi1: 1.0,
                m0: one_minus,
                m1: one_minus,
            });
        }
        let r = self.ratio;
        let c = 1.0 - 2.0 * alpha;
        let b = 1.0 - r * c;
        let d = ((1.0 - r) * (1.0 - r * c * c)).max(0.0);
        let sq = math::sqrt(d);
        let limit = self.param.upper_limit();
        let mut xi1 = (b + sq) / (2.0 * alpha);
        if xi1 >= limit {
            xi1 = next_down(limit);
        }
        if xi1 < 1.0 {
            xi1 = 1.0;
        }
        let xi0 = r / xi1;
        let m0 = (1.0 + r * c + sq) / 2.0;
        let m1 = r * one_minus * one_minus / m0;
        Ok(RootPair { xi0, xi1, m0, m1 })
    }
}

/// Solve `f(xi) = ratio` for the given parameters.
pub fn solve_f_equation(alpha: f64, ratio: f64) -> Result<RootPair> {
    NormalizedProblem::new(alpha, ratio)?.solve_f()
}

/// Solve `phi^2(xi) = ratio` for the given parameters.
pub fn solve_phi_equation(alpha: f64, ratio: f64) -> Result<RootPair> {
    NormalizedProblem::new(alpha, ratio)?.solve_phi()
}

/// Largest double strictly below `x` (positive finite `x`).
pub(crate) fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// Bisect a sign change of `f` on `[lo, hi]` until the bracket cannot shrink,
/// then return the endpoint with the smaller residual. Runs at most 200
/// halvings (a full-width double bracket needs fewer).
pub(crate) fn bisect_to_ulp(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if math::abs(f(lo)) <= math::abs(f(hi)) {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{f_eval, phi2_eval};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn f_roots_with_exact_solution() {
        // alpha = 1/2: f(x) = sqrt(x(2-x)); f = 0.6 at x = 0.2 and 1.8.
        let roots = solve_f_equation(0.5, 0.6).unwrap();
        assert!(rel(roots.xi0, 0.2) < 1e-14);
        assert!(rel(roots.xi1, 1.8) < 1e-14);
    }

    #[test]
    fn f_roots_fixed_values() {
        let roots = solve_f_equation(1.0 / 3.0, 0.9).unwrap();
        assert!(rel(roots.xi0, 0.44759995220241915308) < 1e-13);
        assert!(rel(roots.xi1, 1.6841649655336518886) < 1e-13);
    }

    #[test]
    fn phi_roots_fixed_values() {
        // alpha = 1/3, r = 1/2: roots (5 -+ sqrt 17)/4.
        let roots = solve_phi_equation(1.0 / 3.0, 0.5).unwrap();
        assert!(rel(roots.xi0, 0.21922359359558486254) < 1e-14);
        assert!(rel(roots.xi1, 2.2807764064044151375) < 1e-14);
    }

    #[test]
    fn roots_straddle_one_and_reproduce_ratio() {
        for &(alpha, r) in &[
            (0.5, 0.9),
            (0.3, 0.5),
            (0.1, 0.75),
            (0.02, 0.9),
            (1.0 / 3.0, 0.999),
        ] {
            let p = NormalizedProblem::new(alpha, r).unwrap();
            let fr = p.solve_f().unwrap();
            assert!(fr.xi0 <= 1.0 && fr.xi1 >= 1.0);
            assert!(rel(f_eval(alpha, fr.xi0), r) < 1e-12, "alpha={alpha} r={r}");
            assert!(rel(f_eval(alpha, fr.xi1), r) < 1e-12, "alpha={alpha} r={r}");
            let pr = p.solve_phi().unwrap();
            assert!(pr.xi0 <= 1.0 && pr.xi1 >= 1.0);
            assert!(rel(phi2_eval(alpha, pr.xi0), r) < 1e-12);
            assert!(rel(phi2_eval(alpha, pr.xi1), r) < 1e-12);
        }
    }

    #[test]
    fn complements_agree_with_their_roots() {
        // The directly solved complements and the subtraction 1 - alpha*xi
        // describe the same number; they may only differ by the subtraction's
        // absolute rounding, never by more.
        for &(alpha, r) in &[(0.5, 0.05), (0.3, 0.4), (0.1, 0.9), (0.45, 0.002)] {
            let p = NormalizedProblem::new(alpha, r).unwrap();
            for roots in [p.solve_f().unwrap(), p.solve_phi().unwrap()] {
                assert!((roots.m0 - (1.0 - alpha * roots.xi0)).abs() < 1e-14);
                assert!((roots.m1 - (1.0 - alpha * roots.xi1)).abs() < 1e-14);
                assert!(roots.m0 > 0.0 && roots.m1 > 0.0);
            }
        }
    }

    #[test]
    fn lower_f_root_survives_small_alpha() {
        // xi0 ~ r^(1/alpha) = 1.3e-40 at alpha = 0.01: hopeless for a linear
        // bracket, fine in log space.
        let roots = solve_f_equation(0.01, 0.4).unwrap();
        assert!(roots.xi0 > 0.0 && roots.xi0 < 1e-35);
        assert!(rel(f_eval(0.01, roots.xi0), 0.4) < 1e-11);
    }

    #[test]
    fn lower_f_root_underflow_is_reported() {
        // r^(1/alpha) below the smallest subnormal: no representable witness.
        assert!(matches!(
            solve_f_equation(0.001, 0.4).unwrap_err(),
            Error::OutOfRange { .. }
        ));
    }

    #[test]
    fn tiny_ratio_round_trip() {
        // f(1e-12) at alpha = 1/4 is the frozen kernel value; solving for it
        // must come back to 1e-12.
        let roots = solve_f_equation(0.25, 0.001240806478802566814).unwrap();
        assert!(rel(roots.xi0, 1e-12) < 1e-13);
    }

    #[test]
    fn degenerate_and_clamped_ratios() {
        let p = NormalizedProblem::new(0.3, 1.0).unwrap();
        assert!(p.is_degenerate() && !p.clamped());
        let unit = RootPair {
            xi0: 1.0,
            xi1: 1.0,
            m0: 0.7,
            m1: 0.7,
        };
        assert_eq!(p.solve_f().unwrap(), unit);
        assert_eq!(p.solve_phi().unwrap(), unit);

        let p = NormalizedProblem::new(0.3, 1.0 + 1e-10).unwrap();
        assert!(p.is_degenerate() && p.clamped());

        let p = NormalizedProblem::new(0.3, 1.0 - 1e-13).unwrap();
        assert!(p.is_degenerate());

        assert!(matches!(
            NormalizedProblem::new(0.3, 1.0 + 1e-8).unwrap_err(),
            Error::Infeasible { .. }
        ));
        assert!(matches!(
            NormalizedProblem::new(0.3, 0.0).unwrap_err(),
            Error::Infeasible { .. }
        ));
        assert!(matches!(
            NormalizedProblem::new(0.3, -0.5).unwrap_err(),
            Error::Infeasible { .. }
        ));
        assert!(matches!(
            NormalizedProblem::new(0.3, f64::NAN).unwrap_err(),
            Error::NonFinite { .. }
        ));
    }

    #[test]
    fn phi_root_product_identity() {
        for &(alpha, r) in &[(0.5, 0.3), (0.25, 0.8), (0.04, 0.6)] {
            let roots = solve_phi_equation(alpha, r).unwrap();
            assert!(rel(roots.xi0 * roots.xi1, r) < 1e-15);
        }
    }

    #[test]
    fn roots_stay_interior() {
        // Even for ratios that push xi1 against 1/alpha, the returned root
        // must stay strictly inside so witnesses remain positive.
        let roots = solve_f_equation(0.5, 1e-9).unwrap();
        assert!(roots.xi1 < 2.0);
        let roots = solve_phi_equation(0.5, 1e-9).unwrap();
        assert!(roots.xi1 < 2.0 && roots.xi0 > 0.0);
    }

    #[test]
    fn bisect_finds_simple_root() {
        let root = bisect_to_ulp(0.0, 2.0, |x| x * x - 2.0);
        assert!(rel(root, core::f64::consts::SQRT_2) < 1e-15);
    }
}
