use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};

/// `exp(θ (E_ij − E_ji))` in dimension `n` (0-based, `i < j`): identity except
/// `(i,i) = (j,j) = cos θ`, `(i,j) = sin θ`, `(j,i) = −sin θ`.
pub fn plane_rotation(n: usize, i: usize, j: usize, theta: f64) -> Result<UnitaryMatrix> {
    if i >= j || j >= n {
        return Err(Error::IndexOutOfRange { n, i, j });
    }
    let mut m = ComplexMatrix::identity(n);
    let (s, c) = theta.sin_cos();
    m.set(i, i, Complex64::new(c, 0.0));
    m.set(j, j, Complex64::new(c, 0.0));
    m.set(i, j, Complex64::new(s, 0.0));
    m.set(j, i, Complex64::new(-s, 0.0));
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// `m ← m · R(i, j, θ)` without forming `R`.
pub fn apply_rotation_right(m: &mut ComplexMatrix, i: usize, j: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    for r in 0..m.rows() {
        let a = *m.get(r, i);
        let b = *m.get(r, j);
        m.set(r, i, a * c - b * s);
        m.set(r, j, a * s + b * c);
    }
}

/// `m ← R(i, j, θ) · m` without forming `R`.
pub fn apply_rotation_left(m: &mut ComplexMatrix, i: usize, j: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    for col in 0..m.cols() {
        let a = *m.get(i, col);
        let b = *m.get(j, col);
        m.set(i, col, a * c + b * s);
        m.set(j, col, -a * s + b * c);
    }
}
