use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::rotation::apply_rotation_right;
use crate::linalg::ComplexMatrix;

/// Plane rotation `R(i, j, θ)`, 0-based with `i < j`. Serialized 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
}

#[derive(Serialize, Deserialize)]
struct LetterWire {
    i: usize,
    j: usize,
    theta: f64,
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LetterWire {
            i: self.i + 1,
            j: self.j + 1,
            theta: self.theta,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = LetterWire::deserialize(d)?;
        if w.i == 0 || w.i >= w.j {
            return Err(serde::de::Error::custom(format!("bad plane ({}, {})", w.i, w.j)));
        }
        if !w.theta.is_finite() {
            return Err(serde::de::Error::custom("non-finite angle"));
        }
        Ok(Letter {
            i: w.i - 1,
            j: w.j - 1,
            theta: w.theta,
        })
    }
}

impl Letter {
    pub fn new(i: usize, j: usize, theta: f64) -> Self {
        debug_assert!(i < j);
        Letter { i, j, theta }
    }

    /// Conjugate by a coordinate permutation: `(a, b) ↦ (perm[a], perm[b])`,
    /// re-sorted with the angle negated when the order flips.
    pub fn permuted(self, perm: &[usize]) -> Letter {
        let (a, b) = (perm[self.i], perm[self.j]);
        if a < b {
            Letter::new(a, b, self.theta)
        } else {
            Letter::new(b, a, -self.theta)
        }
    }

    pub fn shifted(self, by: usize) -> Letter {
        Letter::new(self.i + by, self.j + by, self.theta)
    }

    pub fn plane(&self) -> (usize, usize) {
        (self.i, self.j)
    }
}

/// Ordered product of plane rotations in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneRotationWord {
    pub n: usize,
    pub letters: Vec<Letter>,
}

impl PlaneRotationWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Self {
        PlaneRotationWord { n, letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn planes(&self) -> Vec<(usize, usize)> {
        self.letters.iter().map(Letter::plane).collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.letters.iter().map(|l| l.theta).collect()
    }

    /// Left-to-right product.
    pub fn eval(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.n);
        for l in &self.letters {
            apply_rotation_right(&mut m, l.i, l.j, l.theta);
        }
        m
    }

    /// Word of the inverse: reversed order, negated angles.
    pub fn inverse(&self) -> PlaneRotationWord {
        PlaneRotationWord {
            n: self.n,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.i, l.j, -l.theta))
                .collect(),
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> PlaneRotationWord {
        PlaneRotationWord {
            n: self.n,
            letters: self.letters.iter().map(|l| l.permuted(perm)).collect(),
        }
    }

    /// Embeds into dimension `n` at coordinate offset `by`.
    pub fn embedded(&self, n: usize, by: usize) -> PlaneRotationWord {
        PlaneRotationWord {
            n,
            letters: self.letters.iter().map(|l| l.shifted(by)).collect(),
        }
    }

    pub fn concat(mut self, rest: &PlaneRotationWord) -> PlaneRotationWord {
        assert_eq!(self.n, rest.n);
        self.letters.extend_from_slice(&rest.letters);
        self
    }

    /// `‖WᵀW − I‖_F` together with the largest imaginary part of `W`.
    pub fn orthogonality_defect(&self) -> f64 {
        let w = self.eval();
        w.unitarity_defect() + w.max_imag()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::plane_rotation;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn eval_matches_explicit_product() {
        let w = PlaneRotationWord::new(4, vec![Letter::new(0, 3, 0.3), Letter::new(1, 2, -1.1), Letter::new(0, 2, 2.0)]);
        let mut expect = ComplexMatrix::identity(4);
        for l in &w.letters {
            expect = expect.matmul(&plane_rotation(4, l.i, l.j, l.theta).unwrap());
        }
        assert!(w.eval().sub_mat(&expect).frobenius_norm() < 1e-15);
        assert!(w.orthogonality_defect() < 1e-14);
        let id = w.eval().matmul(&w.inverse().eval());
        assert!(id.sub_mat(&ComplexMatrix::identity(4)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn permutation_conjugates_evaluation() {
        let w = PlaneRotationWord::new(3, vec![Letter::new(0, 1, FRAC_PI_3), Letter::new(1, 2, 0.2)]);
        let perm = [2, 0, 1];
        let direct = w.permuted(&perm).eval();
        let conj = w.eval().unpermute_symmetric(&perm);
        assert!(direct.sub_mat(&conj).frobenius_norm() < 1e-15);
    }

    #[test]
    fn json_is_one_based() {
        let l = Letter::new(1, 5, 0.5);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"i":2,"j":6,"theta":0.5}"#);
        assert_eq!(serde_json::from_str::<Letter>(&s).unwrap(), l);
        assert!(serde_json::from_str::<Letter>(r#"{"i":0,"j":2,"theta":0.0}"#).is_err());
        assert!(serde_json::from_str::<Letter>(r#"{"i":3,"j":2,"theta":0.0}"#).is_err());
    }
}
