//! Crate-wide error type.

use core::fmt;

/// Everything that can go wrong across the crate, with enough context to
/// report the offending value.
#[derive(Copy, Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// An input slice was empty.
    Empty,
    /// Fewer entries than the operation supports.
    TooFew { needed: usize, got: usize },
    /// `values` and `weights` have different lengths.
    LengthMismatch { values: usize, weights: usize },
    /// A NaN or infinity where a finite number is required.
    NonFinite { what: &'static str, value: f64 },
    /// A zero or negative number where a positive one is required.
    NonPositive { what: &'static str, value: f64 },
    /// Weights do not sum to 1 within tolerance.
    WeightSum { sum: f64 },
    /// The kernel parameter is outside its admissible interval.
    AlphaRange { alpha: f64, max: f64 },
    /// Kernel argument outside `[0, 1/alpha]` (or the open interval where
    /// the operation requires interior points).
    DomainX { x: f64, limit: f64 },
    /// `s` is only defined for `t < 1`.
    DomainT { t: f64 },
    /// A mean ratio outside `(0, 1]`: no sample can attain it.
    Infeasible { ratio: f64 },
    /// The operation degenerates for this input (e.g. a constant sample).
    Degenerate { what: &'static str },
    /// The index passed as the minimal-weight position does not attain the
    /// minimum weight.
    NotMinWeight { index: usize },
    /// The request itself is malformed (contradictory or unsupported).
    BadRequest { what: &'static str },
    /// Size exceeds a hard limit of the exhaustive oracle.
    TooLarge { n: usize, max: usize },
    /// Random feasible generation kept failing; the parameters leave almost
    /// no feasible volume.
    Generation { failures: u64, attempts: u64 },
    /// A result is not representable in f64 (underflow or overflow).
    OutOfRange { what: &'static str },
    /// Matrix entry `(i, j)` differs from `(j, i)`.
    NotSymmetric { i: usize, j: usize },
    /// Cholesky hit a non-positive pivot with this value.
    NotPositiveDefinite { pivot: f64 },
    /// A polynomial coefficient that must be nonzero is zero.
    ZeroCoefficient { index: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::Empty => write!(f, "input is empty"),
            Error::TooFew { needed, got } => {
                write!(f, "need at least {needed} entries, got {got}")
            }
            Error::LengthMismatch { values, weights } => {
                write!(f, "{values} values but {weights} weights")
            }
            Error::NonFinite { what, value } => {
                write!(f, "{what} must be finite, got {value}")
            }
            Error::NonPositive { what, value } => {
                write!(f, "{what} must be positive, got {value}")
            }
            Error::WeightSum { sum } => {
                write!(f, "weights must sum to 1, got {sum}")
            }
            Error::AlphaRange { alpha, max } => {
                write!(f, "alpha must lie in (0, {max}], got {alpha}")
            }
            Error::DomainX { x, limit } => {
                write!(f, "argument {x} outside the kernel domain [0, {limit}]")
            }
            Error::DomainT { t } => write!(f, "s is undefined for t = {t} (needs t < 1)"),
            Error::Infeasible { ratio } => {
                write!(f, "mean ratio {ratio} is infeasible (must lie in (0, 1])")
            }
            Error::Degenerate { what } => write!(f, "degenerate input: {what}"),
            Error::NotMinWeight { index } => {
                write!(f, "index {index} does not attain the minimal weight")
            }
            Error::BadRequest { what } => write!(f, "bad request: {what}"),
            Error::TooLarge { n, max } => {
                write!(f, "n = {n} exceeds the oracle limit {max}")
            }
            Error::Generation { failures, attempts } => {
                write!(
                    f,
                    "feasible generation failed too often ({failures} of {attempts} attempts)"
                )
            }
            Error::OutOfRange { what } => write!(f, "not representable in f64: {what}"),
            Error::NotSymmetric { i, j } => {
                write!(f, "matrix entry ({i}, {j}) does not match ({j}, {i})")
            }
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::ZeroCoefficient { index } => {
                write!(f, "coefficient {index} must be nonzero")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
