//! Positive weighted samples and their three classical means.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// How far the weight sum may stray from 1 before we refuse the input.
/// Anything inside is renormalized exactly.
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// The harmonic, geometric, and arithmetic mean of one sample.
/// Always satisfies `h <= g <= a` up to rounding.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MeanTriple {
    pub h: f64,
    pub g: f64,
    pub a: f64,
}

/// A list of positive values with positive weights summing to 1.
///
/// Construction validates everything once; the accessors can then be trusted
/// not to produce NaN. Weights are renormalized by their exact sum so that
/// downstream code may rely on `sum == 1` to a few ulp.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

pub(crate) fn validate_weights(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::Empty);
    }
    let mut sum = 0.0;
    for &w in weights {
        if !w.is_finite() {
            return Err(Error::NonFinite {
                what: "weight",
                value: w,
            });
        }
        if w <= 0.0 {
            return Err(Error::NonPositive {
                what: "weight",
                value: w,
            });
        }
        sum += w;
    }
    if math::abs(sum - 1.0) > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum { sum });
    }
    Ok(weights.iter().map(|w| w / sum).collect())
}

fn validate_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    for &x in values {
        if !x.is_finite() {
            return Err(Error::NonFinite {
                what: "value",
                value: x,
            });
        }
        if x <= 0.0 {
            return Err(Error::NonPositive {
                what: "value",
                value: x,
            });
        }
    }
    Ok(())
}

impl WeightedSample {
    pub fn new(values: &[f64], weights: &[f64]) -> Result<Self> {
        validate_values(values)?;
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                weights: weights.len(),
            });
        }
        let weights = validate_weights(weights)?;
        Ok(WeightedSample {
            values: values.to_vec(),
            weights,
        })
    }

    /// Equal weights `1/n`.
    pub fn equal_weights(values: &[f64]) -> Result<Self> {
        validate_values(values)?;
        let n = values.len();
        let w = 1.0 / n as f64;
        Ok(WeightedSample {
            values: values.to_vec(),
            weights: alloc::vec![w; n],
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        // new() rejects empty input, so this is always false.
        self.values.is_empty()
    }

    /// All three means in one pass. The geometric mean is accumulated in log
    /// space, so huge and tiny values do not overflow intermediates.
    pub fn means(&self) -> MeanTriple {
        let mut inv = 0.0;
        let mut lng = 0.0;
        let mut avg = 0.0;
        for (&x, &w) in self.values.iter().zip(&self.weights) {
            inv += w / x;
            lng += w * math::ln(x);
            avg += w * x;
        }
        MeanTriple {
            h: 1.0 / inv,
            g: math::exp(lng),
            a: avg,
        }
    }

    /// Index and value of the smallest weight (first index on ties).
    pub fn min_weight(&self) -> (usize, f64) {
        let mut idx = 0;
        let mut min = self.weights[0];
        for (i, &w) in self.weights.iter().enumerate().skip(1) {
            if w < min {
                idx = i;
                min = w;
            }
        }
        (idx, min)
    }

    /// The sample of reciprocals with the same weights. Swaps the roles of
    /// the harmonic and arithmetic means: `h(1/x) = 1/a(x)`, `g(1/x) = 1/g(x)`,
    /// `a(1/x) = 1/h(x)`.
    pub fn reciprocal_dual(&self) -> Self {
        WeightedSample {
            values: self.values.iter().map(|x| 1.0 / x).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Rescaled so the arithmetic mean is 1.
    pub fn normalized(&self) -> Self {
        let a = self.means().a;
        self.scaled(1.0 / a)
    }

    pub(crate) fn scaled(&self, c: f64) -> Self {
        WeightedSample {
            values: self.values.iter().map(|x| c * x).collect(),
            weights: self.weights.clone(),
        }
    }
}
