use num_complex::Complex64;

use super::eigen::hermitian_eigen;
use super::matrix::ComplexMatrix;
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// `exp(x)` for skew-Hermitian `x`, via the eigendecomposition of `−i·x`.
pub fn expm_skew_hermitian(x: &ComplexMatrix) -> Result<UnitaryMatrix> {
    expm_skew_hermitian_with(x, &Tolerances::default())
}

pub fn expm_skew_hermitian_with(x: &ComplexMatrix, tol: &Tolerances) -> Result<UnitaryMatrix> {
    if !x.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", x.rows(), x.cols())));
    }
    let norm = x.frobenius_norm();
    let defect = x.add_mat(&x.adjoint()).frobenius_norm();
    if defect > tol.skew * norm {
        return Err(Error::NotSkewHermitian(defect));
    }
    let n = x.rows();
    if norm == 0.0 {
        return Ok(UnitaryMatrix::identity(n));
    }
    let h = x.scale(&Complex64::new(0.0, -1.0));
    let eig = hermitian_eigen(&h, tol.max_sweeps)?;
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::new(0.0, l).exp())
        .collect();
    let v = &eig.vectors;
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v.get(i, k) * phases[k] * v.get(j, k).conj()).sum()
    });
    Ok(UnitaryMatrix::new_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::random_skew_hermitian;
    use crate::linalg::rotation::plane_rotation;

    #[test]
    fn zero_gives_identity() {
        let e = expm_skew_hermitian(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(*e.as_matrix(), ComplexMatrix::identity(3));
    }

    #[test]
    fn real_generator_gives_plane_rotation() {
        let theta = 0.83;
        let x = ComplexMatrix::from_real(2, 2, &[0.0, theta, -theta, 0.0]).unwrap();
        let e = expm_skew_hermitian(&x).unwrap();
        let r = plane_rotation(2, 0, 1, theta).unwrap();
        assert!(e.sub_mat(&r).frobenius_norm() < 1e-14);
    }

    #[test]
    fn inverse_is_exp_of_negative() {
        let x = random_skew_hermitian(5, 3);
        let a = expm_skew_hermitian(&x).unwrap();
        let b = expm_skew_hermitian(&x.scale(&Complex64::new(-1.0, 0.0))).unwrap();
        let defect = a.matmul(&b).sub_mat(&ComplexMatrix::identity(5)).frobenius_norm();
        assert!(defect <= 1e-12, "{defect}");
        assert!(a.defect() <= 1e-12 * 5.0);
    }

    #[test]
    fn hermitian_input_rejected() {
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(matches!(expm_skew_hermitian(&h), Err(Error::NotSkewHermitian(_))));
    }
}
