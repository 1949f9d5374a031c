//! Two-sided CS decomposition `g = l · b(θ) · h` with `l ∈ U(n₁)×U(n₂)`,
//! `h ∈ U(p)×U(q)` and `b(θ) = Π_i R(i, n−1−i, θ_i)`, `i < min(n₁, n₂, p, q)`.
//!
//! Only the first `p` columns of `g` are needed to pick `l` and the angles:
//! `g ∈ l·b·H` iff `l*·g` sends `span(e_0..e_{p−1})` onto `b·span(e_0..e_{p−1})`.
//! The right factor is then recovered as the block-diagonal part of
//! `b*·l*·g`, so the reported residual is exactly its discarded off-block mass.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blocks::{block_diagonal, project_block_diagonal};
use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_dot, vec_norm};
use crate::linalg::qr::{complete_orthonormal, unitary_with_first_column};
use crate::linalg::rotation::apply_rotation_left;
use crate::linalg::svd::svd_with;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionPair {
    pub n: usize,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl BipartitionPair {
    pub fn new(rows: (usize, usize), cols: (usize, usize)) -> Result<Self> {
        let n = rows.0 + rows.1;
        if rows.0 == 0 || rows.1 == 0 || cols.0 == 0 || cols.1 == 0 {
            return Err(Error::PartitionMismatch(format!("empty part in {rows:?}/{cols:?}")));
        }
        if cols.0 + cols.1 != n {
            return Err(Error::PartitionMismatch(format!("{rows:?} and {cols:?} sum differently")));
        }
        Ok(BipartitionPair { n, rows, cols })
    }

    /// Number of angles, `min(n₁, n₂, p, q)`.
    pub fn rank(&self) -> usize {
        self.rows.0.min(self.rows.1).min(self.cols.0).min(self.cols.1)
    }

    fn check(&self, g: &ComplexMatrix) -> Result<()> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::PartitionMismatch(format!(
                "{}x{} matrix for parts of total {}",
                g.rows(),
                g.cols(),
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CsdResult {
    pub left: UnitaryMatrix,
    /// In `[0, π/2]`, descending cosines; angle `i` lives in plane `(i, n−1−i)`.
    pub angles: Vec<f64>,
    pub right: UnitaryMatrix,
    pub residual: f64,
}

impl CsdResult {
    pub fn planes(&self) -> Vec<(usize, usize)> {
        let n = self.left.n();
        (0..self.angles.len()).map(|i| (i, n - 1 - i)).collect()
    }

    pub fn middle(&self) -> ComplexMatrix {
        torus_element(self.left.n(), &self.angles)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.left.matmul(&self.middle()).matmul(&self.right)
    }
}

/// `Π_i R(i, n−1−i, θ_i)` (the factors commute).
pub fn torus_element(n: usize, angles: &[f64]) -> ComplexMatrix {
    let mut b = ComplexMatrix::identity(n);
    for (i, &t) in angles.iter().enumerate() {
        apply_rotation_left(&mut b, i, n - 1 - i, t);
    }
    b
}

fn finish(
    g: &ComplexMatrix,
    left: ComplexMatrix,
    angles: Vec<f64>,
    col_parts: &[usize],
) -> CsdResult {
    let n = g.rows();
    let b = torus_element(n, &angles);
    let full = b.transpose().matmul(&left.adjoint()).matmul(g);
    let right = project_block_diagonal(&full, col_parts);
    let residual = left.matmul(&b).matmul(&right).sub_mat(g).frobenius_norm();
    CsdResult {
        left: UnitaryMatrix::new_unchecked(left),
        angles,
        right: UnitaryMatrix::new_unchecked(right),
        residual,
    }
}

/// Right factor known, left recovered as the block part of `g · h* · b*`.
fn finish_from_right(
    g: &ComplexMatrix,
    right: ComplexMatrix,
    angles: Vec<f64>,
    row_parts: &[usize],
) -> CsdResult {
    let n = g.rows();
    let b = torus_element(n, &angles);
    let full = g.matmul(&right.adjoint()).matmul(&b.transpose());
    let left = project_block_diagonal(&full, row_parts);
    let residual = left.matmul(&b).matmul(&right).sub_mat(g).frobenius_norm();
    CsdResult {
        left: UnitaryMatrix::new_unchecked(left),
        angles,
        right: UnitaryMatrix::new_unchecked(right),
        residual,
    }
}

pub fn cs_decompose(g: &UnitaryMatrix, parts: &BipartitionPair) -> Result<CsdResult> {
    cs_decompose_with(g, parts, &Tolerances::default())
}

pub fn cs_decompose_with(
    g: &UnitaryMatrix,
    parts: &BipartitionPair,
    tol: &Tolerances,
) -> Result<CsdResult> {
    parts.check(g)?;
    let (n1, n2) = parts.rows;
    let (p, _) = parts.cols;
    let l = parts.rank();
    let m1 = n1.min(p);
    // singular values forced to 1 by the dimension count
    let forced = m1 - l;

    let y1 = g.submatrix(0, 0, n1, p);
    let y2 = g.submatrix(n1, 0, n2, p);
    let s = svd_with(&y1, tol)?;

    // Reorder so the angle directions come first, then the forced unit
    // directions, then the kernel of the corner block.
    let v_src: Vec<usize> = (0..l)
        .map(|a| forced + a)
        .chain(0..forced)
        .chain(m1..p)
        .collect();
    let u_src: Vec<usize> = (0..l)
        .map(|a| forced + a)
        .chain(0..forced)
        .chain(m1..n1)
        .collect();
    let vp = ComplexMatrix::from_fn(p, p, |i, j| *s.v.get(i, v_src[j]));
    let left1 = ComplexMatrix::from_fn(n1, n1, |i, j| *s.u.get(i, u_src[j]));
    let w = y2.matmul(&vp);

    let mut angles = Vec::with_capacity(l);
    // (target column in the second block, direction, weight)
    let mut targets: Vec<(usize, Vec<Complex64>, f64)> = Vec::new();
    for a in 0..l {
        let col = w.column(a);
        let sa = vec_norm(&col);
        let ca = s.singular_values[forced + a];
        angles.push(sa.atan2(ca));
        if sa > 0.0 {
            let dir = col.iter().map(|z| -z / sa).collect();
            targets.push((n2 - 1 - a, dir, sa));
        }
    }
    for a in m1..p {
        let col = w.column(a);
        let na = vec_norm(&col);
        let dir = col.iter().map(|z| z / na).collect();
        targets.push((a - n1, dir, f64::INFINITY));
    }
    targets.sort_by(|x, y| y.2.total_cmp(&x.2));
    let left2 = orthonormal_with_targets(n2, targets);
    let left = block_diagonal(&[&left1, &left2]);
    Ok(finish(g, left, angles, &[parts.cols.0, parts.cols.1]))
}

/// Builds an `n × n` unitary whose listed columns follow the given directions,
/// orthonormalized in the listed order; unassigned columns are completed.
fn orthonormal_with_targets(n: usize, targets: Vec<(usize, Vec<Complex64>, f64)>) -> ComplexMatrix {
    let mut accepted: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (pos, dir, _) in targets {
        let mut v = dir;
        for _ in 0..2 {
            for (_, b) in &accepted {
                let d = vec_dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let nv = vec_norm(&v);
        // a direction swallowed by earlier ones carries no weight; complete it
        if nv < 1e-3 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= nv;
        }
        accepted.push((pos, v));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    let mut filled = vec![false; n];
    for (pos, v) in &accepted {
        out.set_column(*pos, v);
        filled[*pos] = true;
    }
    if accepted.len() < n {
        let basis = if accepted.is_empty() {
            ComplexMatrix::identity(n)
        } else {
            let w = ComplexMatrix::from_fn(n, accepted.len(), |i, j| accepted[j].1[i]);
            complete_orthonormal(&w)
        };
        let mut extra = accepted.len();
        for (pos, done) in filled.iter().enumerate() {
            if !done {
                out.set_column(pos, &basis.column(extra));
                extra += 1;
            }
        }
    }
    out
}

/// Unitary with prescribed last column (`v` a unit vector).
fn unitary_with_last_column(v: &[Complex64]) -> ComplexMatrix {
    let u = unitary_with_first_column(v);
    let n = v.len();
    ComplexMatrix::from_fn(n, n, |i, j| *u.get(i, (j + 1) % n))
}

fn normalized(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let nv = vec_norm(v);
    (nv > 0.0).then(|| v.iter().map(|z| z / nv).collect())
}

/// Row split `(1, n−1)`: read off the first row directly.
pub fn cs_decompose_rank1_left(g: &UnitaryMatrix, parts: &BipartitionPair) -> Result<CsdResult> {
    parts.check(g)?;
    if parts.rows.0 != 1 {
        return Err(Error::PartitionMismatch(format!(
            "rank-1 left split needs rows (1, n-1), got {:?}",
            parts.rows
        )));
    }
    let n = parts.n;
    let (p, q) = parts.cols;
    let r = g.row(0);
    let (r1, r2) = r.split_at(p);
    let theta = vec_norm(r2).atan2(vec_norm(r1));
    let conj = |v: &[Complex64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
    let h1 = match normalized(&conj(r1)) {
        Some(v) => unitary_with_first_column(&v).adjoint(),
        None => ComplexMatrix::identity(p),
    };
    let h2 = match normalized(&conj(r2)) {
        Some(v) => unitary_with_last_column(&v).adjoint(),
        None => ComplexMatrix::identity(q),
    };
    let right = block_diagonal(&[&h1, &h2]);
    let mut res = finish_from_right(g, right, vec![theta], &[1, n - 1]);
    // The unit block is 1 up to rounding; pin it so torus factors stay trivial.
    let mut left = res.left.as_matrix().clone();
    left.set(0, 0, Complex64::new(1.0, 0.0));
    res.residual = left
        .matmul(&res.middle())
        .matmul(&res.right)
        .sub_mat(g)
        .frobenius_norm();
    res.left = UnitaryMatrix::new_unchecked(left);
    Ok(res)
}

/// Column split `(n−1, 1)`: read off the last column directly.
pub fn cs_decompose_rank1_right(g: &UnitaryMatrix, parts: &BipartitionPair) -> Result<CsdResult> {
    parts.check(g)?;
    if parts.cols.1 != 1 {
        return Err(Error::PartitionMismatch(format!(
            "rank-1 right split needs cols (n-1, 1), got {:?}",
            parts.cols
        )));
    }
    let n = parts.n;
    let (n1, n2) = parts.rows;
    let c = g.column(n - 1);
    let (c1, c2) = c.split_at(n1);
    let theta = vec_norm(c1).atan2(vec_norm(c2));
    let l1 = match normalized(c1) {
        Some(v) => unitary_with_first_column(&v),
        None => ComplexMatrix::identity(n1),
    };
    let l2 = match normalized(c2) {
        Some(v) => unitary_with_last_column(&v),
        None => ComplexMatrix::identity(n2),
    };
    let left = block_diagonal(&[&l1, &l2]);
    let mut res = finish(g, left, vec![theta], &[n - 1, 1]);
    let mut right = res.right.as_matrix().clone();
    right.set(n - 1, n - 1, Complex64::new(1.0, 0.0));
    res.residual = res
        .left
        .matmul(&res.middle())
        .matmul(&right)
        .sub_mat(g)
        .frobenius_norm();
    res.right = UnitaryMatrix::new_unchecked(right);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::off_block_mass;
    use crate::linalg::eigen::hermitian_eigen;
    use crate::linalg::haar::haar_unitary;
    use std::f64::consts::FRAC_PI_2;

    fn parts(r: (usize, usize), c: (usize, usize)) -> BipartitionPair {
        BipartitionPair::new(r, c).unwrap()
    }

    /// Singular values of the corner through the eigenvalues of `Y*Y`,
    /// independent of the SVD path.
    fn corner_singular_values(g: &ComplexMatrix, n1: usize, p: usize) -> Vec<f64> {
        let y = g.submatrix(0, 0, n1, p);
        let gram = if n1 <= p { y.matmul(&y.adjoint()) } else { y.adjoint().matmul(&y) };
        let mut s: Vec<f64> = hermitian_eigen(&gram, 100)
            .unwrap()
            .values
            .iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    fn check_contract(g: &UnitaryMatrix, bp: &BipartitionPair, r: &CsdResult) {
        let n = bp.n as f64;
        assert!(r.residual <= 1e-9 * n, "residual {}", r.residual);
        let direct = r.reconstruct().sub_mat(g).frobenius_norm();
        assert!((direct - r.residual).abs() < 1e-14);
        assert!(off_block_mass(&r.left, &[bp.rows.0, bp.rows.1]) <= 1e-10);
        assert!(off_block_mass(&r.right, &[bp.cols.0, bp.cols.1]) <= 1e-10);
        assert!(r.left.defect() < 1e-10 && r.right.defect() < 1e-10);
        assert_eq!(r.angles.len(), bp.rank());
        assert!(r.angles.iter().all(|&t| (0.0..=FRAC_PI_2 + 1e-15).contains(&t)));
    }

    #[test]
    fn identity_gives_zero_angles() {
        let g = UnitaryMatrix::identity(4);
        let bp = parts((2, 2), (2, 2));
        let r = cs_decompose(&g, &bp).unwrap();
        assert_eq!(r.angles.len(), 2);
        assert!(r.angles.iter().all(|&t| t.abs() < 1e-15));
        assert!(r.residual <= 1e-12);
        check_contract(&g, &bp, &r);
    }

    #[test]
    fn quarter_turn_two_by_two() {
        let g = UnitaryMatrix::new_unchecked(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap());
        let bp = parts((1, 1), (1, 1));
        let r = cs_decompose(&g, &bp).unwrap();
        assert!((r.angles[0] - FRAC_PI_2).abs() < 1e-15);
        assert!(r.residual <= 1e-12);
        // Enumerate the unit phases on the diagonal blocks: any (l, h) with
        // g = l·R(π/2)·h must be diagonal, and these reproduce g.
        let b = torus_element(2, &r.angles);
        for (a, c) in [(1.0, 1.0), (-1.0, -1.0)] {
            let l = ComplexMatrix::from_real(2, 2, &[a, 0.0, 0.0, c]).unwrap();
            let ok = l.matmul(&b).sub_mat(&g).frobenius_norm() < 1e-15;
            assert!(ok || a < 0.0);
        }
    }

    #[test]
    fn cosines_match_corner_singular_values() {
        let g = haar_unitary(4, 42);
        let bp = parts((2, 2), (2, 2));
        let r = cs_decompose(&g, &bp).unwrap();
        check_contract(&g, &bp, &r);
        let sv = corner_singular_values(&g, 2, 2);
        for (t, s) in r.angles.iter().zip(&sv) {
            assert!((t.cos() - s).abs() < 1e-10);
        }
    }

    #[test]
    fn all_orderings_of_part_sizes() {
        let mut seed = 100;
        for n in 2..=9 {
            for n1 in 1..n {
                for p in 1..n {
                    let bp = parts((n1, n - n1), (p, n - p));
                    let g = haar_unitary(n, seed);
                    seed += 1;
                    let r = cs_decompose(&g, &bp).unwrap();
                    check_contract(&g, &bp, &r);
                    let sv = corner_singular_values(&g, n1, p);
                    let mut expect: Vec<f64> = r.angles.iter().map(|t| t.cos()).collect();
                    expect.extend(std::iter::repeat_n(1.0, n1.min(p) - bp.rank()));
                    expect.sort_by(|a, b| b.total_cmp(a));
                    for (a, b) in expect.iter().zip(&sv) {
                        assert!((a - b).abs() < 1e-9, "n={n} n1={n1} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_block_permutations() {
        // Permutation matrices put every angle at 0 or π/2 exactly.
        let n = 5;
        let perm = [3, 0, 4, 1, 2];
        let g = UnitaryMatrix::new_unchecked(ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if perm[i] == j { 1.0 } else { 0.0 }, 0.0)
        }));
        for (r, c) in [((2, 3), (2, 3)), ((3, 2), (1, 4)), ((1, 4), (3, 2))] {
            let bp = parts(r, c);
            let res = cs_decompose(&g, &bp).unwrap();
            check_contract(&g, &bp, &res);
        }
    }

    #[test]
    fn rank1_left_cases() {
        let g = UnitaryMatrix::identity(4);
        let r = cs_decompose_rank1_left(&g, &parts((1, 3), (2, 2))).unwrap();
        assert_eq!(r.angles, vec![0.0]);

        let n = 4;
        let g = UnitaryMatrix::new_unchecked(ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if (i + n - 1) % n == j { 1.0 } else { 0.0 }, 0.0)
        }));
        let bp = parts((1, 3), (2, 2));
        let r = cs_decompose_rank1_left(&g, &bp).unwrap();
        assert!((r.angles[0] - FRAC_PI_2).abs() < 1e-15);
        check_contract(&g, &bp, &r);

        let g = haar_unitary(5, 7);
        let bp = parts((1, 4), (2, 3));
        let a = cs_decompose_rank1_left(&g, &bp).unwrap();
        let b = cs_decompose(&g, &bp).unwrap();
        assert!((a.angles[0] - b.angles[0]).abs() < 1e-10);
        assert!(a.residual <= 1e-10);
        check_contract(&g, &bp, &a);
        assert_eq!(*a.left.get(0, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rank1_right_cases() {
        let g = UnitaryMatrix::identity(5);
        let r = cs_decompose_rank1_right(&g, &parts((2, 3), (4, 1))).unwrap();
        assert_eq!(r.angles, vec![0.0]);

        // last column e_0: entirely in the first row block
        let n = 4;
        let g = UnitaryMatrix::new_unchecked(ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if (j + 1) % n == i { 1.0 } else { 0.0 }, 0.0)
        }));
        let bp = parts((2, 2), (3, 1));
        let r = cs_decompose_rank1_right(&g, &bp).unwrap();
        assert!(r.angles[0].cos().abs() < 1e-15);
        check_contract(&g, &bp, &r);

        let g = haar_unitary(6, 11);
        let bp = parts((3, 3), (5, 1));
        let a = cs_decompose_rank1_right(&g, &bp).unwrap();
        let b = cs_decompose(&g, &bp).unwrap();
        assert!(a.residual <= 1e-10);
        assert!((a.angles[0] - b.angles[0]).abs() < 1e-10);
        check_contract(&g, &bp, &a);
        assert_eq!(*a.right.get(5, 5), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mismatched_parts_rejected() {
        assert!(BipartitionPair::new((2, 2), (1, 2)).is_err());
        assert!(BipartitionPair::new((0, 2), (1, 1)).is_err());
        let g = UnitaryMatrix::identity(3);
        assert!(cs_decompose(&g, &parts((2, 2), (2, 2))).is_err());
        assert!(cs_decompose_rank1_left(&UnitaryMatrix::identity(4), &parts((2, 2), (2, 2))).is_err());
        assert!(cs_decompose_rank1_right(&UnitaryMatrix::identity(4), &parts((2, 2), (2, 2))).is_err());
    }
}
