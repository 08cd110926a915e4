//! Coefficient bounds for polynomials with positive real roots.
//!
//! For `p(x) = a_0 x^n + a_1 x^(n-1) + ... + a_n` with all roots positive,
//! Vieta turns mean inequalities on the roots into coefficient inequalities.
//! The Fransén-Lohne inequality bounds the next-to-last coefficient from
//! below,
//!
//! `|a_(n-1)| >= n^2 |a_0 a_n / a_1|`,
//!
//! and the simple arithmetic-mean bound applied to the reciprocal roots adds
//! a reverse inequality on top of it:
//!
//! `|a_(n-1)| < n^2 |a_0 a_n / a_1| + e |a_0| (|a_1| / (n |a_0|))^(n-1)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Polynomial in one variable, coefficients in descending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    /// At least degree 2 (three coefficients); leading and constant
    /// coefficients must be nonzero so the root product and degree are what
    /// they claim.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::TooFew {
                needed: 3,
                got: coeffs.len(),
            });
        }
        for &c in coeffs {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "coefficient",
                    value: c,
                });
            }
        }
        if coeffs[0] == 0.0 {
            return Err(Error::ZeroCoefficient { index: 0 });
        }
        if coeffs[coeffs.len() - 1] == 0.0 {
            return Err(Error::ZeroCoefficient {
                index: coeffs.len() - 1,
            });
        }
        Ok(PolynomialCoeffs {
            coeffs: coeffs.to_vec(),
        })
    }

    /// Monic polynomial with the given positive roots.
    pub fn from_roots(roots: &[f64]) -> Result<Self> {
        if roots.len() < 2 {
            return Err(Error::TooFew {
                needed: 2,
                got: roots.len(),
            });
        }
        for &r in roots {
            if !r.is_finite() {
                return Err(Error::NonFinite {
                    what: "root",
                    value: r,
                });
            }
            if r <= 0.0 {
                return Err(Error::NonPositive {
                    what: "root",
                    value: r,
                });
            }
        }
        let mut coeffs = alloc::vec![1.0];
        for &r in roots {
            coeffs.push(0.0);
            // Multiply by (x - r) in place, highest degree first.
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k] - r * coeffs[k - 1];
            }
        }
        PolynomialCoeffs::new(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Fransén-Lohne lower bound on `|a_(n-1)|`.
    pub fn fransen_lohne_lower(&self) -> Result<f64> {
        let n = self.degree() as f64;
        let a0 = self.coeffs[0];
        let a1 = self.coeffs[1];
        let an = self.coeffs[self.coeffs.len() - 1];
        if a1 == 0.0 {
            return Err(Error::ZeroCoefficient { index: 1 });
        }
        Ok(n * n * math::abs(a0 * an / a1))
    }

    /// Reverse (upper) companion to the Fransén-Lohne bound.
    pub fn reverse_upper(&self) -> Result<f64> {
        let lower = self.fransen_lohne_lower()?;
        let n = self.degree() as f64;
        let a0 = self.coeffs[0];
        let a1 = self.coeffs[1];
        let extra = core::f64::consts::E
            * math::abs(a0)
            * math::powf(math::abs(a1 / (n * a0)), n - 1.0);
        Ok(lower + extra)
    }
}

/// Both bounds next to the actual coefficient.
#[derive(Copy, Clone, Debug)]
pub struct PolyBoundReport {
    pub lower: f64,
    pub observed: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Evaluate both bounds against `|a_(n-1)|`. `holds` allows a hair of
/// relative slack on each side: the bounds are strict in exact arithmetic but
/// equality cases land within rounding of the boundary.
pub fn verify_bounds(poly: &PolynomialCoeffs) -> Result<PolyBoundReport> {
    let lower = poly.fransen_lohne_lower()?;
    let upper = poly.reverse_upper()?;
    let observed = math::abs(poly.coeffs()[poly.coeffs().len() - 2]);
    let slack = 1e-12;
    let holds =
        observed >= lower * (1.0 - slack) && observed <= upper * (1.0 + slack);
    Ok(PolyBoundReport {
        lower,
        observed,
        upper,
        holds,
    })
}
