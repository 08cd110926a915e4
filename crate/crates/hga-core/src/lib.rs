//! Two-sided bounds among weighted harmonic, geometric, and arithmetic means.
//!
//! For a positive sample with normalized weights, write `h <= g <= a` for its
//! harmonic, geometric, and arithmetic means. When two of the three are known,
//! the third is pinned to an interval that depends only on the two known means
//! and the smallest weight `alpha`. This crate computes those intervals sharply
//! (together with explicit extremal samples attaining the endpoints), provides
//! looser closed-form bounds that need no equation solving, and ships a
//! brute-force oracle over two-valued samples for independent verification.
//!
//! Two applications are included: a trace bound for the inverse of a symmetric
//! positive definite matrix in terms of its trace and determinant, and
//! Fransén-Lohne-type bounds for the second-to-last coefficient of a
//! polynomial with positive roots.
//!
//! The crate is `no_std`-compatible: disable the default `std` feature and
//! enable `libm` to supply the float transcendentals.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod math;

pub mod applications;
pub mod bounds;
pub mod kernels;
pub mod oracle;
pub mod rng;
pub mod sample;
pub mod simple;
pub mod solve;

pub use bounds::{
    arithmetic_bounds, extremal_configuration, geometric_bounds, harmonic_bounds, BoundInterval,
};
pub use error::{Error, Result};
pub use kernels::KernelParam;
pub use rng::CounterRng;
pub use sample::{MeanTriple, WeightedSample};
pub use solve::{NormalizedProblem, RootPair};
