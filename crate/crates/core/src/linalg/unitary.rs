use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Square complex matrix together with its measured unitarity defect
/// `‖M*M − I‖_F`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ComplexMatrix", try_from = "ComplexMatrix")]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
    defect: f64,
}

impl UnitaryMatrix {
    /// Accepts `m` when it is square, finite and `defect ≤ tol.unitary · n`.
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "unitary must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NotUnitary(f64::NAN));
        }
        let defect = m.unitarity_defect();
        if defect > tol.unitary * m.rows() as f64 {
            return Err(Error::NotUnitary(defect));
        }
        Ok(UnitaryMatrix { matrix: m, defect })
    }

    /// Wraps without checking; the defect is still measured.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        let defect = m.unitarity_defect();
        UnitaryMatrix { matrix: m, defect }
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            matrix: ComplexMatrix::identity(n),
            defect: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn inverse(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            matrix: self.matrix.adjoint(),
            defect: self.defect,
        }
    }

    pub fn compose(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix::new_unchecked(self.matrix.matmul(&rhs.matrix))
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;
    fn deref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<UnitaryMatrix> for ComplexMatrix {
    fn from(u: UnitaryMatrix) -> Self {
        u.matrix
    }
}

impl TryFrom<ComplexMatrix> for UnitaryMatrix {
    type Error = Error;
    /// Deserialized matrices are checked at a loose `1e-8·n`; the exact
    /// defect is kept for later checks.
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        let loose = Tolerances {
            unitary: 1e-8,
            ..Tolerances::default()
        };
        UnitaryMatrix::new(m, &loose)
    }
}
