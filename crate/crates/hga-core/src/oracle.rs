//! Independent verification of the sharp bounds.
//!
//! Extremal samples for these problems take at most two distinct values, so
//! the true extremes of the third mean can be found by brute force: enumerate
//! every proper nonempty subset, put one value on the subset and another on
//! its complement, and solve the one remaining scalar equation per branch.
//! Nothing here reuses the kernel-root machinery of [`crate::solve`]; the
//! residuals are written directly from the mean definitions and bisected with
//! a local helper, so agreement with [`crate::bounds`] is evidence, not
//! circularity.
//!
//! [`random_feasible_search`] complements the enumeration from the inside:
//! it generates many-valued samples whose two known means match exactly and
//! records the spread of the third, which must stay within the sharp interval.

use alloc::vec::Vec;

use crate::bounds::BoundInterval;
use crate::error::{Error, Result};
use crate::math;
use crate::rng::CounterRng;
use crate::sample::{validate_weights, WeightedSample};

/// Hard cap on the sample size for exhaustive enumeration (2^n - 2 subsets).
pub const MAX_POINTS: usize = 12;

/// Two-value roots with a coordinate below this (after normalizing the larger
/// known mean to 1) are skipped and counted in
/// [`OracleReport::boundary_hits`]: their configurations degenerate toward a
/// zero value and their means are numerically meaningless.
const BOUNDARY: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MeanKind {
    Harmonic,
    Geometric,
    Arithmetic,
}

/// Which two means are known. The remaining one is the verification target.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum KnownPair {
    GeometricArithmetic { g: f64, a: f64 },
    HarmonicArithmetic { h: f64, a: f64 },
    HarmonicGeometric { h: f64, g: f64 },
}

impl KnownPair {
    pub fn target(&self) -> MeanKind {
        match self {
            KnownPair::GeometricArithmetic { .. } => MeanKind::Harmonic,
            KnownPair::HarmonicArithmetic { .. } => MeanKind::Geometric,
            KnownPair::HarmonicGeometric { .. } => MeanKind::Arithmetic,
        }
    }

    fn checked_ratio(&self) -> Result<f64> {
        let (small_name, small, large_name, large) = match *self {
            KnownPair::GeometricArithmetic { g, a } => ("geometric mean", g, "arithmetic mean", a),
            KnownPair::HarmonicArithmetic { h, a } => ("harmonic mean", h, "arithmetic mean", a),
            KnownPair::HarmonicGeometric { h, g } => ("harmonic mean", h, "geometric mean", g),
        };
        for (what, v) in [(small_name, small), (large_name, large)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: v });
            }
            if v <= 0.0 {
                return Err(Error::NonPositive { what, value: v });
            }
        }
        let ratio = small / large;
        if ratio > 1.0 + 1e-9 {
            return Err(Error::Infeasible { ratio });
        }
        Ok(if ratio > 1.0 || math::abs(ratio - 1.0) <= 1e-12 {
            1.0
        } else {
            ratio
        })
    }
}

/// What the exhaustive two-value enumeration saw.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub observed_min: f64,
    pub observed_max: f64,
    pub argmin_sample: WeightedSample,
    pub argmax_sample: WeightedSample,
    /// Number of two-value configurations whose means were evaluated.
    pub evaluations: u64,
    /// Roots skipped because a coordinate fell below the boundary cutoff.
    pub boundary_hits: u64,
    /// Subset bitmask (bit i = index i) of the extremal configuration; `None`
    /// for a degenerate (constant) problem. The sharp theory predicts a
    /// smallest-weight singleton or its complement.
    pub argmin_subset: Option<u32>,
    pub argmax_subset: Option<u32>,
}

/// Spread of the target mean over randomly generated feasible samples.
#[derive(Copy, Clone, Debug)]
pub struct SearchReport {
    pub observed_min: f64,
    pub observed_max: f64,
    /// Samples generated and evaluated.
    pub accepted: u64,
    /// Draws discarded because the two-coordinate repair was infeasible.
    pub rejected: u64,
}

struct RawExtremes {
    min: f64,
    max: f64,
    min_x: f64,
    min_y: f64,
    min_mask: u32,
    max_x: f64,
    max_y: f64,
    max_mask: u32,
    evaluations: u64,
    boundary_hits: u64,
}

impl RawExtremes {
    fn new() -> Self {
        RawExtremes {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            min_x: 0.0,
            min_y: 0.0,
            min_mask: 0,
            max_x: 0.0,
            max_y: 0.0,
            max_mask: 0,
            evaluations: 0,
            boundary_hits: 0,
        }
    }

    fn record(&mut self, value: f64, x: f64, y: f64, mask: u32) {
        self.evaluations += 1;
        if value < self.min {
            self.min = value;
            self.min_x = x;
            self.min_y = y;
            self.min_mask = mask;
        }
        if value > self.max {
            self.max = value;
            self.max_x = x;
            self.max_y = y;
            self.max_mask = mask;
        }
    }
}

/// Local bisection, deliberately separate from the solver used by the
/// closed-form path.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
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

fn subset_weight(w: &[f64], mask: u32) -> f64 {
    let mut beta = 0.0;
    for (i, &wi) in w.iter().enumerate() {
        if mask & (1 << i) != 0 {
            beta += wi;
        }
    }
    beta
}

fn build_values(n: usize, mask: u32, x: f64, y: f64) -> Vec<f64> {
    (0..n)
        .map(|i| if mask & (1 << i) != 0 { x } else { y })
        .collect()
}

/// Normalized problem (`a = 1`): enumerate subsets, solve the geometric-mean
/// constraint `X^beta Y^(1-beta) = r` on both branches, record the harmonic
/// mean of each root configuration.
fn enumerate_known_ga(w: &[f64], r: f64) -> RawExtremes {
    let n = w.len();
    let lnr = math::ln(r);
    let mut ext = RawExtremes::new();
    for mask in 1..((1u32 << n) - 1) {
        let beta = subset_weight(w, mask);
        let l1b = math::ln_1p(-beta);
        // ln of the sample's geometric mean minus ln r, as a function of the
        // subset value X (the complement takes Y = (1 - beta X)/(1 - beta)).
        let resid = |x: f64| {
            let m = 1.0 - beta * x;
            if m <= 0.0 {
                return f64::NEG_INFINITY;
            }
            beta * math::ln(x) + (1.0 - beta) * (math::ln(m) - l1b) - lnr
        };
        // Rising branch: root in (0, 1]. If even X = BOUNDARY overshoots the
        // target the root is below the cutoff.
        if resid(BOUNDARY) > 0.0 {
            ext.boundary_hits += 1;
        } else {
            let x = bisect(BOUNDARY, 1.0, resid);
            let y = (1.0 - beta * x) / (1.0 - beta);
            let h = 1.0 / (beta / x + (1.0 - beta) / y);
            ext.record(h, x, y, mask);
        }
        // Falling branch: root in [1, Xmax], Xmax chosen so Y >= BOUNDARY.
        let xmax = (1.0 - BOUNDARY * (1.0 - beta)) / beta;
        if resid(xmax) > 0.0 {
            ext.boundary_hits += 1;
        } else {
            let x = bisect(1.0, xmax, resid);
            let y = (1.0 - beta * x) / (1.0 - beta);
            let h = 1.0 / (beta / x + (1.0 - beta) / y);
            ext.record(h, x, y, mask);
        }
    }
    ext
}

/// Normalized problem (`a = 1`): enumerate subsets, solve the harmonic-mean
/// constraint, record the geometric mean of each root configuration.
fn enumerate_known_ha(w: &[f64], r: f64) -> RawExtremes {
    let n = w.len();
    let inv_h = 1.0 / r;
    let mut ext = RawExtremes::new();
    for mask in 1..((1u32 << n) - 1) {
        let beta = subset_weight(w, mask);
        // 1/h of the configuration minus 1/h target; decreasing on (0, 1],
        // increasing on [1, 1/beta).
        let resid = |x: f64| {
            let m = 1.0 - beta * x;
            if m <= 0.0 {
                return f64::INFINITY;
            }
            beta / x + (1.0 - beta) * (1.0 - beta) / m - inv_h
        };
        if resid(BOUNDARY) < 0.0 {
            ext.boundary_hits += 1;
        } else {
            let x = bisect(BOUNDARY, 1.0, resid);
            let y = (1.0 - beta * x) / (1.0 - beta);
            let g = math::exp(beta * math::ln(x) + (1.0 - beta) * math::ln(y));
            ext.record(g, x, y, mask);
        }
        let xmax = (1.0 - BOUNDARY * (1.0 - beta)) / beta;
        if resid(xmax) < 0.0 {
            ext.boundary_hits += 1;
        } else {
            let x = bisect(1.0, xmax, resid);
            let y = (1.0 - beta * x) / (1.0 - beta);
            let g = math::exp(beta * math::ln(x) + (1.0 - beta) * math::ln(y));
            ext.record(g, x, y, mask);
        }
    }
    ext
}

fn constant_report(w: &[f64], level: f64, target: f64) -> OracleReport {
    let values: Vec<f64> = core::iter::repeat(level).take(w.len()).collect();
    let sample = WeightedSample::new(&values, w).expect("constant sample is valid");
    OracleReport {
        observed_min: target,
        observed_max: target,
        argmin_sample: sample.clone(),
        argmax_sample: sample,
        evaluations: 0,
        boundary_hits: 0,
        argmin_subset: None,
        argmax_subset: None,
    }
}

/// Exhaustive two-value extremes of the withheld mean.
///
/// Needs `2 <= n <= MAX_POINTS`. The report's samples are rescaled back to
/// the original (unnormalized) problem.
pub fn two_value_extremes(weights: &[f64], known: KnownPair) -> Result<OracleReport> {
    let w = validate_weights(weights)?;
    let n = w.len();
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    if n > MAX_POINTS {
        return Err(Error::TooLarge {
            n,
            max: MAX_POINTS,
        });
    }
    let r = known.checked_ratio()?;
    match known {
        KnownPair::GeometricArithmetic { a, .. } => {
            if r == 1.0 {
                return Ok(constant_report(&w, a, a));
            }
            let ext = enumerate_known_ga(&w, r);
            finish(&w, ext, a, false)
        }
        KnownPair::HarmonicArithmetic { a, .. } => {
            if r == 1.0 {
                return Ok(constant_report(&w, a, a));
            }
            let ext = enumerate_known_ha(&w, r);
            finish(&w, ext, a, false)
        }
        KnownPair::HarmonicGeometric { h, .. } => {
            if r == 1.0 {
                return Ok(constant_report(&w, h, h));
            }
            // Reciprocal duality: the duals 1/x_i have arithmetic mean 1/h and
            // geometric mean 1/g, so run the (g, a)-known engine on ratio h/g
            // and invert. Inversion flips min and max.
            let ext = enumerate_known_ga(&w, r);
            finish(&w, ext, h, true)
        }
    }
}

/// Turn normalized raw extremes into a report on the original scale.
/// `invert` handles the dual route: values map through `x -> scale/x` and the
/// min/max roles swap.
fn finish(w: &[f64], ext: RawExtremes, scale: f64, invert: bool) -> Result<OracleReport> {
    if ext.evaluations == 0 {
        return Err(Error::OutOfRange {
            what: "every two-value root fell below the boundary cutoff",
        });
    }
    let n = w.len();
    let build = |x: f64, y: f64, mask: u32| -> Result<WeightedSample> {
        let mut values = build_values(n, mask, x, y);
        for v in &mut values {
            *v = if invert { scale / *v } else { scale * *v };
        }
        WeightedSample::new(&values, w)
    };
    let min_sample = build(ext.min_x, ext.min_y, ext.min_mask)?;
    let max_sample = build(ext.max_x, ext.max_y, ext.max_mask)?;
    if invert {
        Ok(OracleReport {
            observed_min: scale / ext.max,
            observed_max: scale / ext.min,
            argmin_sample: max_sample,
            argmax_sample: min_sample,
            evaluations: ext.evaluations,
            boundary_hits: ext.boundary_hits,
            argmin_subset: Some(ext.max_mask),
            argmax_subset: Some(ext.min_mask),
        })
    } else {
        Ok(OracleReport {
            observed_min: scale * ext.min,
            observed_max: scale * ext.max,
            argmin_sample: min_sample,
            argmax_sample: max_sample,
            evaluations: ext.evaluations,
            boundary_hits: ext.boundary_hits,
            argmin_subset: Some(ext.min_mask),
            argmax_subset: Some(ext.max_mask),
        })
    }
}

/// One random sample whose pair of known means matches exactly (to rounding),
/// or `None` if this draw could not be repaired and should be retried.
pub(crate) fn generate_feasible(
    w: &[f64],
    known: KnownPair,
    r: f64,
    rng: &mut CounterRng,
) -> Option<WeightedSample> {
    let n = w.len();
    match known {
        KnownPair::GeometricArithmetic { a, .. } => {
            generate_ga(w, r, rng).map(|v| scale_sample(&v, w, a))
        }
        KnownPair::HarmonicArithmetic { a, .. } => {
            generate_ha(w, r, rng).map(|v| scale_sample(&v, w, a))
        }
        KnownPair::HarmonicGeometric { h, .. } => generate_ga(w, r, rng).map(|v| {
            let values: Vec<f64> = (0..n).map(|i| h / v[i]).collect();
            WeightedSample::new(&values, w).expect("positive reciprocals")
        }),
    }
}

fn scale_sample(v: &[f64], w: &[f64], c: f64) -> WeightedSample {
    let values: Vec<f64> = v.iter().map(|x| c * x).collect();
    WeightedSample::new(&values, w).expect("positive scaled values")
}

/// Draw log-normal values, rescale to arithmetic mean 1, then repair the
/// geometric mean through a random coordinate pair while keeping the pair's
/// weighted sum (hence `a`) fixed.
fn generate_ga(w: &[f64], r: f64, rng: &mut CounterRng) -> Option<Vec<f64>> {
    let n = w.len();
    let sigma = math::sqrt(-2.0 * math::ln(r)).min(1.5);
    let mut v: Vec<f64> = (0..n).map(|_| math::exp(sigma * rng.normal())).collect();
    let asum: f64 = v.iter().zip(w).map(|(x, wi)| wi * x).sum();
    for x in &mut v {
        *x /= asum;
    }
    let i = rng.index(n);
    let mut j = rng.index(n - 1);
    if j >= i {
        j += 1;
    }
    let wsum = w[i] + w[j];
    let beta = w[i] / wsum;
    let s = w[i] * v[i] + w[j] * v[j];
    let abar = s / wsum;
    // Pair geometric target: total ln g minus the rest of the sample.
    let total: f64 = v.iter().zip(w).map(|(x, wi)| wi * math::ln(*x)).sum();
    let pair_target = math::ln(r) - (total - w[i] * math::ln(v[i]) - w[j] * math::ln(v[j]));
    let ln_rho = pair_target / wsum - math::ln(abar);
    if !(ln_rho <= 0.0) {
        return None; // pair would need geometric mean above arithmetic mean
    }
    if ln_rho == 0.0 {
        v[i] = abar;
        v[j] = abar;
        return Some(v);
    }
    // Solve X^beta ((1 - beta X)/(1 - beta))^(1 - beta) = rho on the rising
    // branch, in log space (the root can sit far below 1). Randomizing which
    // index plays X covers the falling branch by symmetry.
    let l1b = math::ln_1p(-beta);
    let y_hi = ln_rho / beta;
    if y_hi < -745.0 {
        return None; // X would underflow
    }
    let y_lo = y_hi + (1.0 - beta) * l1b / beta;
    let resid = |y: f64| {
        let x = math::exp(y);
        beta * y + (1.0 - beta) * (math::ln_1p(-beta * x) - l1b) - ln_rho
    };
    let x = math::exp(bisect(y_lo, y_hi, resid));
    if x == 0.0 {
        return None;
    }
    let yv = (1.0 - beta * x) / (1.0 - beta);
    if yv <= 0.0 {
        return None;
    }
    v[i] = abar * x;
    v[j] = abar * yv;
    if v[i] <= 0.0 || !v[i].is_finite() || !v[j].is_finite() {
        return None;
    }
    Some(v)
}

/// Same scheme with the harmonic mean repaired instead; the pair equation is
/// the quadratic `beta X^2 - (1 - rho(1 - 2 beta)) X + rho beta = 0` (in the
/// pair's normalized variable), solved in closed form with a random branch.
fn generate_ha(w: &[f64], r: f64, rng: &mut CounterRng) -> Option<Vec<f64>> {
    let n = w.len();
    let sigma = math::sqrt(-math::ln(r)).min(1.2);
    let mut v: Vec<f64> = (0..n).map(|_| math::exp(sigma * rng.normal())).collect();
    let asum: f64 = v.iter().zip(w).map(|(x, wi)| wi * x).sum();
    for x in &mut v {
        *x /= asum;
    }
    let i = rng.index(n);
    let mut j = rng.index(n - 1);
    if j >= i {
        j += 1;
    }
    let wsum = w[i] + w[j];
    let beta = w[i] / wsum;
    let s = w[i] * v[i] + w[j] * v[j];
    let abar = s / wsum;
    let total: f64 = v.iter().zip(w).map(|(x, wi)| wi / *x).sum();
    let pair_needed = 1.0 / r - (total - w[i] / v[i] - w[j] / v[j]);
    if pair_needed <= 0.0 {
        return None;
    }
    // Normalized pair harmonic ratio; must not exceed 1.
    let rho = wsum / (pair_needed * abar);
    if !(rho > 0.0) || rho > 1.0 {
        return None;
    }
    let c = 1.0 - 2.0 * beta;
    let b = 1.0 - rho * c;
    let d = ((1.0 - rho) * (1.0 - rho * c * c)).max(0.0);
    let x1 = (b + math::sqrt(d)) / (2.0 * beta);
    let x = if rng.uniform() < 0.5 { rho / x1 } else { x1 };
    let yv = (1.0 - beta * x) / (1.0 - beta);
    if x <= 0.0 || yv <= 0.0 {
        return None;
    }
    v[i] = abar * x;
    v[j] = abar * yv;
    if !v[i].is_finite() || !v[j].is_finite() || v[i] <= 0.0 || v[j] <= 0.0 {
        return None;
    }
    Some(v)
}

/// Generate `samples` feasible random samples and report the spread of the
/// target mean. Fails with [`Error::Generation`] when the acceptance rate
/// collapses (the parameters leave almost no feasible volume).
pub fn random_feasible_search(
    weights: &[f64],
    known: KnownPair,
    samples: u32,
    rng: &mut CounterRng,
) -> Result<SearchReport> {
    let w = validate_weights(weights)?;
    if w.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: w.len(),
        });
    }
    if samples == 0 {
        return Err(Error::BadRequest {
            what: "samples must be at least 1",
        });
    }
    let r = known.checked_ratio()?;
    if r == 1.0 {
        let level = match known {
            KnownPair::GeometricArithmetic { a, .. } | KnownPair::HarmonicArithmetic { a, .. } => a,
            KnownPair::HarmonicGeometric { h, .. } => h,
        };
        return Ok(SearchReport {
            observed_min: level,
            observed_max: level,
            accepted: 1,
            rejected: 0,
        });
    }
    let target = known.target();
    let mut report = SearchReport {
        observed_min: f64::INFINITY,
        observed_max: f64::NEG_INFINITY,
        accepted: 0,
        rejected: 0,
    };
    let cap = 8 * samples as u64 + 128;
    let mut attempts = 0u64;
    while report.accepted < samples as u64 && attempts < cap {
        attempts += 1;
        match generate_feasible(&w, known, r, rng) {
            Some(sample) => {
                let m = sample.means();
                let value = match target {
                    MeanKind::Harmonic => m.h,
                    MeanKind::Geometric => m.g,
                    MeanKind::Arithmetic => m.a,
                };
                report.accepted += 1;
                if value < report.observed_min {
                    report.observed_min = value;
                }
                if value > report.observed_max {
                    report.observed_max = value;
                }
            }
            None => {
                report.rejected += 1;
                if attempts >= 32 && report.rejected * 4 >= attempts * 3 {
                    return Err(Error::Generation {
                        failures: report.rejected,
                        attempts,
                    });
                }
            }
        }
    }
    if report.accepted == 0 {
        return Err(Error::Generation {
            failures: report.rejected,
            attempts,
        });
    }
    Ok(report)
}

/// Outcome of comparing a sharp interval against oracle extremes.
#[derive(Copy, Clone, Debug)]
pub struct SharpnessVerdict {
    /// Oracle extremes sit inside the interval (up to `tol` relative slack).
    pub contained: bool,
    /// Oracle extremes agree with both endpoints to `tol` relative error.
    pub endpoints_match: bool,
    pub lower_error: f64,
    pub upper_error: f64,
    pub tol: f64,
}

impl SharpnessVerdict {
    /// The interval is simultaneously valid and unimprovable.
    pub fn holds(&self) -> bool {
        self.contained && self.endpoints_match
    }
}

/// Compare a closed-form interval with oracle extremes.
pub fn verify_sharpness(
    interval: &BoundInterval,
    report: &OracleReport,
    tol: f64,
) -> SharpnessVerdict {
    let lo_scale = math::abs(interval.lower).max(1e-300);
    let hi_scale = math::abs(interval.upper).max(1e-300);
    let lower_error = math::abs(report.observed_min - interval.lower) / lo_scale;
    let upper_error = math::abs(report.observed_max - interval.upper) / hi_scale;
    SharpnessVerdict {
        contained: report.observed_min >= interval.lower - tol * lo_scale
            && report.observed_max <= interval.upper + tol * hi_scale,
        endpoints_match: lower_error <= tol && upper_error <= tol,
        lower_error,
        upper_error,
        tol,
    }
}
