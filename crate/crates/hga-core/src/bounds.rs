//! Sharp two-sided bounds for the third mean, with extremal witnesses.
//!
//! All three directions reduce to the normalized problem (arithmetic mean 1)
//! and the kernel equations of [`crate::solve`]:
//!
//! * known `(a, g)`, bound `h`: solve `f(xi) = g/a`; then
//!   `h` lies in `[a phi^2(xi0), a phi^2(xi1)]`,
//! * known `(a, h)`, bound `g`: solve `phi^2(xi) = h/a`; then
//!   `g` lies in `[a f(xi1), a f(xi0)]`,
//! * known `(h, g)`, bound `a`: apply the first case to the reciprocal sample
//!   (which swaps `h` and `a`) and invert.
//!
//! Each endpoint is attained by an explicit two-valued sample: the smallest
//! weight carries `xi`, every other position carries `(1 - alpha xi)/(1 - alpha)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::{f_eval_parts, phi2_eval_parts};
use crate::sample::{validate_weights, WeightedSample};
use crate::solve::NormalizedProblem;

/// A two-sided bound along with samples attaining each endpoint.
///
/// The witnesses reproduce the two known means exactly (to rounding) and take
/// the bounded mean to the corresponding endpoint, so sharpness can always be
/// re-checked from the output itself.
#[derive(Clone, Debug)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: WeightedSample,
    pub upper_witness: WeightedSample,
}

fn check_mean(what: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { what, value });
    }
    if value <= 0.0 {
        return Err(Error::NonPositive { what, value });
    }
    Ok(())
}

/// Normalized weights, index of the smallest one, and its value.
fn prepared(weights: &[f64]) -> Result<(Vec<f64>, usize, f64)> {
    let w = validate_weights(weights)?;
    if w.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: w.len(),
        });
    }
    let mut idx = 0;
    let mut min = w[0];
    for (i, &wi) in w.iter().enumerate().skip(1) {
        if wi < min {
            idx = i;
            min = wi;
        }
    }
    Ok((w, idx, min))
}

/// The extremal two-valued sample of the normalized problem: value `xi` at
/// `min_index`, `(1 - alpha xi)/(1 - alpha)` everywhere else.
///
/// `min_index` must attain the smallest weight (sharpness fails otherwise)
/// and `xi` must lie strictly inside `(0, 1/alpha)` so every value stays
/// positive.
pub fn extremal_configuration(
    weights: &[f64],
    min_index: usize,
    xi: f64,
) -> Result<WeightedSample> {
    let w = validate_weights(weights)?;
    if w.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: w.len(),
        });
    }
    if min_index >= w.len() {
        return Err(Error::BadRequest {
            what: "min_index is out of bounds",
        });
    }
    let alpha = w[min_index];
    if w.iter().any(|&wi| wi < alpha) {
        return Err(Error::NotMinWeight { index: min_index });
    }
    if !xi.is_finite() {
        return Err(Error::NonFinite {
            what: "xi",
            value: xi,
        });
    }
    let limit = 1.0 / alpha;
    let m = 1.0 - alpha * xi;
    if xi <= 0.0 || xi >= limit || m <= 0.0 {
        return Err(Error::DomainX { x: xi, limit });
    }
    let other = m / (1.0 - alpha);
    let values: Vec<f64> = (0..w.len())
        .map(|i| if i == min_index { xi } else { other })
        .collect();
    WeightedSample::new(&values, &w)
}

/// Sharp bounds on the harmonic mean from the arithmetic and geometric means.
pub fn harmonic_bounds(weights: &[f64], a: f64, g: f64) -> Result<BoundInterval> {
    check_mean("arithmetic mean", a)?;
    check_mean("geometric mean", g)?;
    let (w, j, alpha) = prepared(weights)?;
    let problem = NormalizedProblem::new(alpha, g / a)?;
    let roots = problem.solve_f()?;
    // The endpoints take the solver's complements: near the domain end
    // phi^2(xi1) = xi1 m1 / (...) is dominated by the vanishing m1, which the
    // solver carries at full relative precision.
    Ok(BoundInterval {
        lower: a * phi2_eval_parts(alpha, roots.xi0, roots.m0),
        upper: a * phi2_eval_parts(alpha, roots.xi1, roots.m1),
        lower_witness: extremal_configuration(&w, j, roots.xi0)?.scaled(a),
        upper_witness: extremal_configuration(&w, j, roots.xi1)?.scaled(a),
    })
}

/// Sharp bounds on the geometric mean from the arithmetic and harmonic means.
pub fn geometric_bounds(weights: &[f64], a: f64, h: f64) -> Result<BoundInterval> {
    check_mean("arithmetic mean", a)?;
    check_mean("harmonic mean", h)?;
    let (w, j, alpha) = prepared(weights)?;
    let problem = NormalizedProblem::new(alpha, h / a)?;
    let roots = problem.solve_phi()?;
    // f is decreasing past 1, so the outer root gives the lower endpoint.
    Ok(BoundInterval {
        lower: a * f_eval_parts(alpha, roots.xi1, roots.m1),
        upper: a * f_eval_parts(alpha, roots.xi0, roots.m0),
        lower_witness: extremal_configuration(&w, j, roots.xi1)?.scaled(a),
        upper_witness: extremal_configuration(&w, j, roots.xi0)?.scaled(a),
    })
}

/// Sharp bounds on the arithmetic mean from the harmonic and geometric means.
///
/// Computed on the reciprocal sample: its harmonic mean is `1/a`, so the
/// harmonic bound for the duals inverts into an arithmetic bound here, and
/// the witnesses are the reciprocals of the dual witnesses.
pub fn arithmetic_bounds(weights: &[f64], h: f64, g: f64) -> Result<BoundInterval> {
    check_mean("harmonic mean", h)?;
    check_mean("geometric mean", g)?;
    let dual = harmonic_bounds(weights, 1.0 / h, 1.0 / g)?;
    Ok(BoundInterval {
        lower: 1.0 / dual.upper,
        upper: 1.0 / dual.lower,
        lower_witness: dual.upper_witness.reciprocal_dual(),
        upper_witness: dual.lower_witness.reciprocal_dual(),
    })
}
