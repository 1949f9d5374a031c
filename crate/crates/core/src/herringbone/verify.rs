use serde::{Deserialize, Serialize};

use crate::blocks::off_block_mass;
use crate::error::{Error, Result};
use crate::linalg::UnitaryMatrix;
use crate::tolerance::Tolerances;

use super::spec::{classify, CaseKind};
use super::{b_shape, DecompositionResult, TripleSpec};

/// Independent recomputation of every contract of a [`DecompositionResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: CaseKind,
    pub residual: f64,
    pub residual_ok: bool,
    pub left_off_block: f64,
    pub right_off_block: f64,
    pub left_unitarity: f64,
    pub right_unitarity: f64,
    pub membership_ok: bool,
    pub word_length: usize,
    pub expected_length: usize,
    pub length_ok: bool,
    pub planes_ok: bool,
    pub orthogonality_defect: f64,
    pub orthogonality_ok: bool,
    pub case_ok: bool,
    pub passed: bool,
}

pub fn verify(g: &UnitaryMatrix, spec: &TripleSpec, result: &DecompositionResult) -> Result<VerificationReport> {
    verify_with(g, spec, result, &Tolerances::default())
}

pub fn verify_with(
    g: &UnitaryMatrix,
    spec: &TripleSpec,
    result: &DecompositionResult,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let n = spec.n();
    for (what, m) in [("input", g), ("left", &result.left), ("right", &result.right)] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!("{what} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
        }
    }
    if result.word.n != n || result.word.letters.iter().any(|l| l.i >= l.j || l.j >= n) {
        return Err(Error::ShapeMismatch("word does not fit the matrix size".into()));
    }
    let nf = n as f64;
    let residual = result.reconstruct().sub_mat(g).frobenius_norm();
    let left_off_block = off_block_mass(&result.left, spec.lparts());
    let right_off_block = off_block_mass(&result.right, spec.hparts());
    let left_unitarity = result.left.unitarity_defect();
    let right_unitarity = result.right.unitarity_defect();
    let membership_ok = left_off_block <= tol.membership
        && right_off_block <= tol.membership
        && left_unitarity <= tol.membership * nf
        && right_unitarity <= tol.membership * nf;

    let label = classify(spec);
    let case_ok = label.kind == result.case.kind;
    let (expected_length, planes_ok) = match b_shape(&label, spec) {
        Ok(shape) => (shape.length, shape.planes == result.word.planes()),
        Err(_) => (0, false),
    };
    let word_length = result.word.len();
    let length_ok = label.is_surjective() && word_length == expected_length;
    let orthogonality_defect = result.word.orthogonality_defect();
    let residual_ok = residual <= tol.residual * nf;
    let orthogonality_ok = orthogonality_defect <= tol.orthogonality;
    Ok(VerificationReport {
        case: label.kind,
        residual,
        residual_ok,
        left_off_block,
        right_off_block,
        left_unitarity,
        right_unitarity,
        membership_ok,
        word_length,
        expected_length,
        length_ok,
        planes_ok,
        orthogonality_defect,
        orthogonality_ok,
        case_ok,
        passed: residual_ok && membership_ok && length_ok && planes_ok && orthogonality_ok && case_ok,
    })
}
