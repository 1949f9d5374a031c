//! Numeric confirmation along `P(ε) = exp(εX) J exp(−εX)`.
//!
//! Off-diagonal blocks of `P(ε)` are `ε Q_ij + O(ε²)`, so coefficient `r` of
//! the loop polynomial is `ε^{r·l} h_r(ε)` with `h_r(0)` the matching
//! coefficient at `Q`. Rescaling by `ε^{−r·l}` makes the comparison O(1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::charpoly::char_poly_numeric;
use crate::linalg::expm::expm_skew_hermitian_with;
use crate::linalg::{ComplexMatrix, PolynomialCoefficients};
use crate::tolerance::Tolerances;

use super::loops::{loop_product, LoopWord};

pub const MAX_HALVINGS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonHit {
    pub epsilon: f64,
    /// Loop polynomial of `P(ε)` before rescaling.
    pub charpoly: PolynomialCoefficients,
    pub flagged_index: usize,
    /// Flagged coefficient times `ε^{−r·l}`.
    #[serde(with = "crate::linalg::json::complex")]
    pub rescaled: Complex64,
}

/// `Ad(exp(εX)) J`.
pub fn perturbed_projection(j: &ComplexMatrix, x: &ComplexMatrix, eps: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let e = expm_skew_hermitian_with(&x.scale(&Complex64::new(eps, 0.0)), tol)?;
    Ok(e.matmul(j).matmul(&e.adjoint()))
}

/// Loop polynomial of `P(ε)` and its coefficient `flagged` rescaled by `ε^{−r·l}`.
pub fn rescaled_coefficient(
    j: &ComplexMatrix,
    x: &ComplexMatrix,
    partition: &[usize],
    lp: &LoopWord,
    flagged: usize,
    eps: f64,
    tol: &Tolerances,
) -> Result<(PolynomialCoefficients, Complex64)> {
    let p = perturbed_projection(j, x, eps, tol)?;
    let poly = char_poly_numeric(&loop_product(&p, partition, lp)?)?;
    let power = (flagged * lp.steps()) as i32;
    let scaled = poly.coefficients[flagged] / eps.powi(power);
    Ok((poly, scaled))
}

/// Tries `ε = 2^{−j}`, `j = 1, …, 40`, until the flagged rescaled coefficient
/// has `|Im| ≥ tol.cert`.
pub fn epsilon_search(
    j: &ComplexMatrix,
    x: &ComplexMatrix,
    partition: &[usize],
    lp: &LoopWord,
    flagged: usize,
    tol: &Tolerances,
) -> Result<EpsilonHit> {
    let mut eps = 1.0;
    for _ in 0..MAX_HALVINGS {
        eps *= 0.5;
        let (charpoly, rescaled) = rescaled_coefficient(j, x, partition, lp, flagged, eps, tol)?;
        if rescaled.im.abs() >= tol.cert {
            return Ok(EpsilonHit {
                epsilon: eps,
                charpoly,
                flagged_index: flagged,
                rescaled,
            });
        }
    }
    Err(Error::SearchExhausted(tol.cert))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub epsilons: Vec<f64>,
    #[serde(with = "crate::linalg::json::complex::vec")]
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    #[serde(with = "crate::linalg::json::complex")]
    pub target: Complex64,
    /// Last error within 20% of `|h_r(0)|`, and errors non-increasing once
    /// they first drop below `|h_r(0)|`.
    pub converged: bool,
}

/// Halves `ε` repeatedly from `start` and tracks the rescaled coefficient
/// against its limit `target`.
#[allow(clippy::too_many_arguments)]
pub fn convergence_check(
    j: &ComplexMatrix,
    x: &ComplexMatrix,
    partition: &[usize],
    lp: &LoopWord,
    flagged: usize,
    target: Complex64,
    start: f64,
    halvings: usize,
    tol: &Tolerances,
) -> Result<ConvergenceReport> {
    let mut epsilons = Vec::with_capacity(halvings + 1);
    let mut values = Vec::with_capacity(halvings + 1);
    let mut errors = Vec::with_capacity(halvings + 1);
    let mut eps = start;
    for _ in 0..=halvings {
        let (_, v) = rescaled_coefficient(j, x, partition, lp, flagged, eps, tol)?;
        epsilons.push(eps);
        values.push(v);
        errors.push((v - target).norm());
        eps *= 0.5;
    }
    let scale = target.norm();
    let settled = errors.iter().position(|&e| e <= scale).unwrap_or(errors.len());
    let monotone = settled < errors.len()
        && errors[settled..]
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-6) + 1e-9 * scale.max(1.0));
    let close = *errors.last().unwrap() <= 0.2 * scale;
    Ok(ConvergenceReport {
        epsilons,
        values,
        errors,
        target,
        converged: monotone && close,
    })
}
