//! Trace-of-inverse bound for symmetric positive definite matrices.
//!
//! The eigenvalues of an SPD matrix have arithmetic mean `trace/n` and
//! geometric mean `det^(1/n)`, while `trace(A^-1) = n / h` for their harmonic
//! mean `h`. Feeding the simple lower harmonic bound (equal weights,
//! `alpha = 1/n`) through that identity gives a trace-of-inverse ceiling from
//! the trace and determinant alone:
//!
//! `trace(A^-1) < e * (trace/n)^(n-1) / det + n^2 / trace`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::CounterRng;

/// Dense symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Build from a full row-major `n * n` entry slice. Entries must be
    /// finite and exactly symmetric.
    pub fn new(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != n * n {
            return Err(Error::BadRequest {
                what: "entry count must be n * n",
            });
        }
        for &e in entries {
            if !e.is_finite() {
                return Err(Error::NonFinite {
                    what: "matrix entry",
                    value: e,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(SymmetricMatrix {
            n,
            entries: entries.to_vec(),
        })
    }

    /// Random SPD matrix with the given spectrum: draw a Gaussian matrix,
    /// orthonormalize its columns, and conjugate `diag(eigenvalues)`.
    pub fn from_spectrum(eigenvalues: &[f64], rng: &mut CounterRng) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for &ev in eigenvalues {
            if !ev.is_finite() {
                return Err(Error::NonFinite {
                    what: "eigenvalue",
                    value: ev,
                });
            }
            if ev <= 0.0 {
                return Err(Error::NonPositive {
                    what: "eigenvalue",
                    value: ev,
                });
            }
        }
        let q = random_orthogonal(n, rng)?;
        // A = Q D Q^T; compute the upper triangle and mirror it exactly so
        // the symmetry check cannot trip on rounding.
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut sum = 0.0;
                for (k, &ev) in eigenvalues.iter().enumerate() {
                    sum += q[i * n + k] * ev * q[j * n + k];
                }
                entries[i * n + j] = sum;
                entries[j * n + i] = sum;
            }
        }
        Ok(SymmetricMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Lower Cholesky factor; fails on any nonpositive pivot.
    fn cholesky(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut l = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(Error::NotPositiveDefinite { pivot: sum });
                    }
                    l[i * n + i] = math::sqrt(sum);
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Ok(l)
    }

    /// `ln det(A)`, via Cholesky. Kept in the log domain because the
    /// determinant itself overflows quickly for large well-scaled matrices.
    pub fn log_det(&self) -> Result<f64> {
        let l = self.cholesky()?;
        let n = self.n;
        Ok(2.0 * (0..n).map(|i| math::ln(l[i * n + i])).sum::<f64>())
    }

    /// `trace(A^-1) = sum_j ||L^-1 e_j||^2` by forward substitution.
    pub fn trace_inverse(&self) -> Result<f64> {
        let l = self.cholesky()?;
        let n = self.n;
        let mut total = 0.0;
        let mut col = alloc::vec![0.0; n];
        for j in 0..n {
            for x in &mut col {
                *x = 0.0;
            }
            for i in j..n {
                let mut sum = if i == j { 1.0 } else { 0.0 };
                for k in j..i {
                    sum -= l[i * n + k] * col[k];
                }
                col[i] = sum / l[i * n + i];
                total += col[i] * col[i];
            }
        }
        Ok(total)
    }
}

fn random_orthogonal(n: usize, rng: &mut CounterRng) -> Result<Vec<f64>> {
    let mut q = alloc::vec![0.0; n * n];
    let mut attempts = 0u64;
    let mut col = 0;
    while col < n {
        attempts += 1;
        if attempts > 64 * n as u64 + 64 {
            return Err(Error::Generation {
                failures: attempts - n as u64,
                attempts,
            });
        }
        let mut v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        // Modified Gram-Schmidt with a second pass for orthogonality.
        for _ in 0..2 {
            for k in 0..col {
                let dot: f64 = (0..n).map(|i| v[i] * q[i * n + k]).sum();
                for i in 0..n {
                    v[i] -= dot * q[i * n + k];
                }
            }
        }
        let norm = math::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if norm < 1e-6 {
            continue; // redraw a nearly dependent direction
        }
        for i in 0..n {
            q[i * n + col] = v[i] / norm;
        }
        col += 1;
    }
    Ok(q)
}

/// The trace-of-inverse ceiling from trace and determinant alone.
pub fn trace_inverse_upper_bound(trace: f64, det: f64, n: usize) -> Result<f64> {
    bound_from_logs(trace, math::ln(checked_positive("determinant", det)?), n)
}

fn checked_positive(what: &'static str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite { what, value: v });
    }
    if v <= 0.0 {
        return Err(Error::NonPositive { what, value: v });
    }
    Ok(v)
}

fn bound_from_logs(trace: f64, log_det: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    let trace = checked_positive("trace", trace)?;
    if !log_det.is_finite() {
        return Err(Error::NonFinite {
            what: "log determinant",
            value: log_det,
        });
    }
    let nf = n as f64;
    // e * (trace/n)^(n-1) / det, assembled in the log domain.
    let main = math::exp(1.0 + (nf - 1.0) * (math::ln(trace) - math::ln(nf)) - log_det);
    Ok(main + nf * nf / trace)
}

/// Full check of the bound on a concrete matrix.
#[derive(Clone, Debug)]
pub struct TraceBoundReport {
    pub trace: f64,
    pub det: f64,
    pub log_det: f64,
    pub trace_inverse: f64,
    pub bound: f64,
    pub holds: bool,
    /// `bound / trace_inverse`; how much room the inequality leaves.
    pub slack_ratio: f64,
}

/// Compute `trace(A^-1)` exactly (via Cholesky) and compare with the bound.
pub fn verify_trace_bound(matrix: &SymmetricMatrix) -> Result<TraceBoundReport> {
    if matrix.n() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: matrix.n(),
        });
    }
    let trace = checked_positive("trace", matrix.trace())?;
    let log_det = matrix.log_det()?;
    let trace_inverse = matrix.trace_inverse()?;
    let bound = bound_from_logs(trace, log_det, matrix.n())?;
    Ok(TraceBoundReport {
        trace,
        det: math::exp(log_det),
        log_det,
        trace_inverse,
        bound,
        holds: trace_inverse < bound,
        slack_ratio: bound / trace_inverse,
    })
}
