//! Householder QR and orthonormal completion.

use num_complex::Complex64;

use super::matrix::{vec_norm, ComplexMatrix};

/// Full Householder QR: `a = q · r` with `q` unitary (`m × m`) and `r` upper
/// trapezoidal (`m × n`).
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for k in 0..m.min(n) {
        let x: Vec<Complex64> = (k..m).map(|i| *r.get(i, k)).collect();
        let norm = vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = vec_norm(&v);
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // r <- (I - 2vv*) r on rows k..m
        for j in 0..n {
            let s: Complex64 = (k..m).map(|i| v[i - k].conj() * r.get(i, j)).sum();
            for i in k..m {
                *r.get_mut(i, j) -= 2.0 * v[i - k] * s;
            }
        }
        // q <- q (I - 2vv*) on columns k..m
        for i in 0..m {
            let s: Complex64 = (k..m).map(|j| q.get(i, j) * v[j - k]).sum();
            for j in k..m {
                *q.get_mut(i, j) -= 2.0 * s * v[j - k].conj();
            }
        }
        for i in k + 1..m {
            r.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    (q, r)
}

/// Extends an `m × r` matrix with orthonormal columns to an `m × m` unitary whose
/// first `r` columns are exactly the input.
pub fn complete_orthonormal(w: &ComplexMatrix) -> ComplexMatrix {
    let (mut q, _) = householder_qr(w);
    q.set_submatrix(0, 0, w);
    q
}

/// Unitary whose first column is the unit vector `v`.
pub fn unitary_with_first_column(v: &[Complex64]) -> ComplexMatrix {
    let w = ComplexMatrix::from_vec(v.len(), 1, v.to_vec()).expect("column shape");
    complete_orthonormal(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::complex_gaussian;

    #[test]
    fn qr_reconstructs_and_is_unitary() {
        for (m, n, seed) in [(5, 3, 1u64), (3, 5, 2), (4, 4, 3)] {
            let a = complex_gaussian(m, n, seed);
            let (q, r) = householder_qr(&a);
            assert!(q.unitarity_defect() < 1e-13);
            assert!(q.matmul(&r).sub_mat(&a).frobenius_norm() < 1e-13);
            for i in 0..m {
                for j in 0..i.min(n) {
                    assert_eq!(r.get(i, j).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn completion_keeps_given_columns() {
        let a = complex_gaussian(6, 2, 9);
        let (q, _) = householder_qr(&a);
        let w = q.submatrix(0, 0, 6, 2);
        let full = complete_orthonormal(&w);
        assert!(full.unitarity_defect() < 1e-13);
        assert_eq!(full.submatrix(0, 0, 6, 2), w);
    }

    #[test]
    fn completion_of_a_basis_vector() {
        let mut e = vec![Complex64::new(0.0, 0.0); 4];
        e[3] = Complex64::new(0.0, 1.0);
        let u = unitary_with_first_column(&e);
        assert!(u.unitarity_defect() < 1e-15);
        assert_eq!(u.column(0), e);
    }
}
