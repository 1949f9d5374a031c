//! Numerical thresholds used by every check in the crate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed `‖U*U − I‖_F / n` for anything labelled unitary.
    pub unitary: f64,
    /// Relative reconstruction error of factorizations (SVD).
    pub factorization: f64,
    /// Relative `‖X + X*‖_F` accepted as skew-Hermitian.
    pub skew: f64,
    /// Threshold below which a numeric imaginary part counts as zero.
    pub real: f64,
    /// Minimum rescaled imaginary part a certificate must exhibit.
    pub cert: f64,
    /// Decomposition residual is allowed `residual * n`.
    pub residual: f64,
    /// Off-block Frobenius mass allowed in left/right factors.
    pub membership: f64,
    /// Orthogonality defect allowed for an evaluated rotation word.
    pub orthogonality: f64,
    /// Sweep cap for the Jacobi and QR iterations.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: 1e-12,
            factorization: 1e-12,
            skew: 1e-10,
            real: 1e-9,
            cert: 1e-6,
            residual: 1e-8,
            membership: 1e-9,
            orthogonality: 1e-10,
            max_sweeps: 100,
        }
    }
}
