//! Consequences of the mean bounds in two concrete settings: traces of
//! inverse positive definite matrices and coefficients of polynomials with
//! positive real roots.

pub mod matrix;
pub mod poly;
