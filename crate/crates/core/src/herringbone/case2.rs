//! `L = U(n₁)×U(n₂)×U(n₃)` with all `nᵢ ≥ 2`, `H = U(2)×U(n−2)`.
//!
//! A two-sided CS step against `U(n₁)×U(n₂+n₃)` leaves a `U(n₂+n₃)` factor,
//! which is decomposed against the stabilizer `U(m−2)×U(1)×U(1)` of the two
//! first-step angles. The two unit phases are shuttled into the first block
//! of `L` so that what remains on the right commutes with those angles.

use num_complex::Complex64;

use crate::blocks::block_diagonal;
use crate::csd::{cs_decompose_with, BipartitionPair};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};
use crate::tolerance::Tolerances;

use super::spec::TripleSpec;
use super::word::{Letter, PlaneRotationWord};
use super::{decompose_with, Factors};

/// Spec of the inner problem on the `U(n₂+n₃)` window.
pub(super) fn window_spec(n2: usize, n3: usize) -> TripleSpec {
    let m = n2 + n3;
    TripleSpec::new(vec![n2, n3], vec![m - 2, 1, 1]).expect("valid inner spec")
}

pub(super) fn run(g: &UnitaryMatrix, lparts: &[usize], tol: &Tolerances) -> Result<Factors> {
    let n = g.n();
    let (n1, n2, n3) = (lparts[0], lparts[1], lparts[2]);
    let m = n2 + n3;
    let step1 = cs_decompose_with(g, &BipartitionPair::new((n1, m), (2, n - 2))?, tol)?;
    let x11 = step1.left.submatrix(0, 0, n1, n1);
    let xw = UnitaryMatrix::new_unchecked(step1.left.submatrix(n1, n1, m, m));
    let inner = decompose_with(&xw, &window_spec(n2, n3), tol)?;

    let h2 = inner.right.as_matrix();
    let alpha = *h2.get(m - 1, m - 1);
    let beta = *h2.get(m - 2, m - 2);
    let one = Complex64::new(1.0, 0.0);
    let mut d = vec![one; n1];
    d[0] = alpha;
    d[1] = beta;
    let d_inv: Vec<Complex64> = d.iter().map(|z| one / z).collect();

    let left = block_diagonal(&[&x11.matmul(&ComplexMatrix::diag(&d_inv)), inner.left.as_matrix()]);
    let shuttle = block_diagonal(&[&ComplexMatrix::diag(&d), h2]);
    let right = shuttle.matmul(&step1.right);

    let a1 = PlaneRotationWord::new(
        n,
        step1
            .angles
            .iter()
            .enumerate()
            .map(|(i, &t)| Letter::new(i, n - 1 - i, t))
            .collect(),
    );
    let word = inner.word.embedded(n, n1).concat(&a1);
    Ok(Factors { left, word, right })
}
