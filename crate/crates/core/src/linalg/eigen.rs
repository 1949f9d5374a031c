//! Eigenvalue routines: cyclic Jacobi for Hermitian matrices and shifted QR
//! on the Hessenberg form for general complex matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: ComplexMatrix,
}

/// `A ← A·G` on columns `p, q`, where `G` is the 2×2 block `[[g00, g01], [g10, g11]]`.
fn apply_right(a: &mut ComplexMatrix, p: usize, q: usize, g: [[Complex64; 2]; 2]) {
    for r in 0..a.rows() {
        let x = *a.get(r, p);
        let y = *a.get(r, q);
        a.set(r, p, x * g[0][0] + y * g[1][0]);
        a.set(r, q, x * g[0][1] + y * g[1][1]);
    }
}

/// `A ← G*·A` on rows `p, q`.
fn apply_left_adjoint(a: &mut ComplexMatrix, p: usize, q: usize, g: [[Complex64; 2]; 2]) {
    for c in 0..a.cols() {
        let x = *a.get(p, c);
        let y = *a.get(q, c);
        a.set(p, c, g[0][0].conj() * x + g[1][0].conj() * y);
        a.set(q, c, g[0][1].conj() * x + g[1][1].conj() * y);
    }
}

pub fn hermitian_eigen(h: &ComplexMatrix, max_sweeps: usize) -> Result<HermitianEigen> {
    assert!(h.is_square(), "hermitian_eigen needs a square matrix");
    let n = h.rows();
    // Symmetrize so that rounding in the input cannot break the iteration.
    let mut a = h.add_mat(&h.adjoint()).scale(&Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    let mut converged = n <= 1 || total == 0.0;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total * 1e-2 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = *a.get(p, q);
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phase = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e = phase.conj();
                let w = [
                    [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
                    [-e * s, e * c],
                ];
                apply_right(&mut a, p, q, w);
                apply_left_adjoint(&mut a, p, q, w);
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                apply_right(&mut v, p, q, w);
            }
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(max_sweeps));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let values = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| *v.get(i, order[j]));
    Ok(HermitianEigen { values, vectors })
}

/// Householder reduction to upper Hessenberg form (similarity transform).
pub fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| *h.get(i, k)).collect();
        let norm = super::matrix::vec_norm(&x);
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x;
        v[0] += phase * norm;
        let vn = super::matrix::vec_norm(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }
        // h <- P h P with P = I - 2vv* acting on indices k+1..n
        for j in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h.get(i, j)).sum();
            for i in k + 1..n {
                *h.get_mut(i, j) -= 2.0 * v[i - k - 1] * s;
            }
        }
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| h.get(i, j) * v[j - k - 1]).sum();
            for j in k + 1..n {
                *h.get_mut(i, j) -= 2.0 * s * v[j - k - 1].conj();
            }
        }
        for i in k + 2..n {
            h.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    h
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// All eigenvalues of a general complex square matrix.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "eigenvalues need a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut h = hessenberg(a);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let cap = 60 * n;
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    loop {
        if hi == 0 {
            eig[0] = *h.get(0, 0);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).norm();
            let diag = h.get(lo, lo).norm() + h.get(lo - 1, lo - 1).norm();
            if sub <= f64::EPSILON * diag || sub <= f64::EPSILON * 1e-3 * scale {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = *h.get(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > cap {
            return Err(Error::ConvergenceFailure(cap));
        }
        let mut shift = wilkinson_shift(
            *h.get(hi - 1, hi - 1),
            *h.get(hi - 1, hi),
            *h.get(hi, hi - 1),
            *h.get(hi, hi),
        );
        if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            shift += Complex64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0);
        }
        for k in lo..=hi {
            *h.get_mut(k, k) -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = *h.get(k, k);
            let y = *h.get(k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let u = *h.get(k, j);
                let w = *h.get(k + 1, j);
                h.set(k, j, c.conj() * u + s.conj() * w);
                h.set(k + 1, j, -s * u + c * w);
            }
            rots.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rots[idx];
            for i in lo..=(k + 1).min(hi) {
                let u = *h.get(i, k);
                let w = *h.get(i, k + 1);
                h.set(i, k, u * c + w * s);
                h.set(i, k + 1, -u * s.conj() + w * c.conj());
            }
        }
        for k in lo..=hi {
            *h.get_mut(k, k) += shift;
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar::complex_gaussian;

    #[test]
    fn hermitian_decomposition_reconstructs() {
        let z = complex_gaussian(6, 6, 11);
        let h = z.add_mat(&z.adjoint());
        let e = hermitian_eigen(&h, 100).unwrap();
        let d = ComplexMatrix::diag(&e.values.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
        let back = e.vectors.matmul(&d).matmul(&e.vectors.adjoint());
        assert!(back.sub_mat(&h).frobenius_norm() < 1e-12);
        assert!(e.vectors.unitarity_defect() < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn general_eigenvalues_match_trace_and_triangular() {
        let z = complex_gaussian(7, 7, 5);
        let ev = eigenvalues(&z).unwrap();
        let tr: Complex64 = ev.iter().sum();
        assert!((tr - z.trace()).norm() < 1e-12);
        let mut t = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in i..3 {
                t.set(i, j, Complex64::new((i + j) as f64, i as f64));
            }
        }
        let mut ev = eigenvalues(&t).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - Complex64::new(0.0, 0.0)).norm() < 1e-14);
        assert!((ev[2] - Complex64::new(4.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_and_rotation_blocks() {
        let r = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        let mut ev = eigenvalues(&r).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(eigenvalues(&n).unwrap().iter().all(|z| z.norm() < 1e-14));
    }
}
