//! `H = U(1)×U(n−1)`: only `g·e₀` matters, and its block norms are the
//! spherical coordinates of a point on the positive orthant.

use num_complex::Complex64;

use crate::blocks::{block_diagonal, block_ranges, offsets, project_block_diagonal};
use crate::error::Result;
use crate::linalg::matrix::vec_norm;
use crate::linalg::qr::unitary_with_first_column;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};

use super::word::{Letter, PlaneRotationWord};
use super::Factors;

/// Angles with `a_k = sin θ_{k−1}`, `a_j = sin θ_{j−1} cos θ_j ⋯ cos θ_{k−1}`
/// and `a_1 = cos θ_1 ⋯ cos θ_{k−1}`; an all-zero prefix gives angle 0.
pub fn spherical_angles(a: &[f64]) -> Vec<f64> {
    let mut prefix = 0.0f64;
    let mut out = Vec::with_capacity(a.len().saturating_sub(1));
    for j in 0..a.len() {
        if j > 0 {
            out.push(a[j].atan2(prefix.sqrt()));
        }
        prefix += a[j] * a[j];
    }
    out
}

pub(super) fn run(g: &UnitaryMatrix, lparts: &[usize]) -> Result<Factors> {
    let n = g.n();
    let v = g.column(0);
    let ranges = block_ranges(lparts);
    let a: Vec<f64> = ranges.iter().map(|r| vec_norm(&v[r.clone()])).collect();
    let angles = spherical_angles(&a);
    let off = offsets(lparts);
    // R(0, o, −θ) sends e₀ to cos θ e₀ + sin θ e_o
    let letters = angles
        .iter()
        .enumerate()
        .map(|(j, &t)| Letter::new(0, off[j + 1], -t))
        .collect();
    let word = PlaneRotationWord::new(n, letters);

    let blocks: Vec<ComplexMatrix> = ranges
        .iter()
        .zip(&a)
        .map(|(r, &ai)| {
            if ai > 0.0 {
                let u: Vec<Complex64> = v[r.clone()].iter().map(|z| z / ai).collect();
                unitary_with_first_column(&u)
            } else {
                ComplexMatrix::identity(r.len())
            }
        })
        .collect();
    let left = block_diagonal(&blocks.iter().collect::<Vec<_>>());
    let lb = left.matmul(&word.eval());
    let mut right = project_block_diagonal(&lb.adjoint().matmul(g), &[1, n - 1]);
    right.set(0, 0, Complex64::new(1.0, 0.0));
    Ok(Factors { left, word, right })
}
