//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use num_complex::Complex64;

use super::matrix::{vec_dot, vec_norm, ComplexMatrix};
use super::qr::complete_orthonormal;
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Clone, Debug)]
pub struct Svd {
    pub u: UnitaryMatrix,
    /// Descending, length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    pub v: UnitaryMatrix,
}

impl Svd {
    /// `U Σ V*` with `Σ` the rectangular diagonal of singular values.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.u.n();
        let n = self.v.n();
        let mut sigma = ComplexMatrix::zeros(m, n);
        for (k, s) in self.singular_values.iter().enumerate() {
            sigma.set(k, k, Complex64::new(*s, 0.0));
        }
        self.u.matmul(&sigma).matmul(&self.v.adjoint())
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    svd_with(m, &Tolerances::default())
}

pub fn svd_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<Svd> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::ShapeMismatch("svd of an empty matrix".into()));
    }
    if m.rows() < m.cols() {
        let t = tall_svd(&m.adjoint(), tol.max_sweeps)?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    tall_svd(m, tol.max_sweeps)
}

fn tall_svd(a: &ComplexMatrix, max_sweeps: usize) -> Result<Svd> {
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);
    let eps = f64::EPSILON;

    let mut converged = n == 1;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vec_dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Columns p, q ← [a_p, a_q e^{-iφ}] · [[c, s], [−s, c]].
                let conj_phase = phase.conj();
                for i in 0..m {
                    let ap = cols[p][i];
                    let aq = cols[q][i] * conj_phase;
                    cols[p][i] = ap * c - aq * s;
                    cols[q][i] = ap * s + aq * c;
                }
                for i in 0..n {
                    let vp = *v.get(i, p);
                    let vq = *v.get(i, q) * conj_phase;
                    v.set(i, p, vp * c - vq * s);
                    v.set(i, q, vp * s + vq * c);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(max_sweeps));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let scale = norms.iter().cloned().fold(0.0, f64::max);
    let mut u_cols = ComplexMatrix::zeros(m, 0);
    let mut singular_values = Vec::with_capacity(n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut kept = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        singular_values.push(norms[j]);
        v_sorted.set_column(k, &v.column(j));
        if norms[j] > scale * 1e-13 && norms[j] > 0.0 {
            kept.push(cols[j].iter().map(|z| z / norms[j]).collect::<Vec<_>>());
        }
    }
    // Rank-deficient columns: complete the left basis orthonormally.
    if !kept.is_empty() {
        u_cols = ComplexMatrix::from_fn(m, kept.len(), |i, j| kept[j][i]);
    }
    let u = if u_cols.cols() == 0 {
        ComplexMatrix::identity(m)
    } else {
        complete_orthonormal(&reorthonormalize(&u_cols))
    };
    Ok(Svd {
        u: UnitaryMatrix::new_unchecked(u),
        singular_values,
        v: UnitaryMatrix::new_unchecked(v_sorted),
    })
}

/// Two passes of modified Gram–Schmidt, in column order.
pub(crate) fn reorthonormalize(w: &ComplexMatrix) -> ComplexMatrix {
    let mut out = w.clone();
    for _ in 0..2 {
        for j in 0..out.cols() {
            let mut c = out.column(j);
            for k in 0..j {
                let b = out.column(k);
                let d = vec_dot(&b, &c);
                for (ci, bi) in c.iter_mut().zip(&b) {
                    *ci -= d * bi;
                }
            }
            let nrm = vec_norm(&c);
            for ci in c.iter_mut() {
                *ci /= nrm;
            }
            out.set_column(j, &c);
        }
    }
    out
}
