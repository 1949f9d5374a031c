//! Loop invariants `A_{i₀…i_l}(P) = P̃_{i₀i₁} ⋯ P̃_{i_{l−1}i_l}` of a matrix
//! partitioned along the `L` blocks, with `P̃_{ij} = P_ij` for `i < j` and
//! `P̃_{ij} = (P_ji)*` for `i > j`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blocks::offsets;
use crate::error::{Error, Result};
use crate::linalg::charpoly::{char_poly, CharPoly, MatrixInput};
use crate::linalg::matrix::{Matrix, Scalar};
use crate::tolerance::Tolerances;

/// Closed walk `i₀ → i₁ → … → i_l = i₀` on block indices (0-based; 1-based in JSON).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopWord {
    indices: Vec<usize>,
}

impl LoopWord {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.len() < 3 {
            return Err(Error::InvalidLoop(format!("{indices:?} has fewer than two steps")));
        }
        if indices.first() != indices.last() {
            return Err(Error::InvalidLoop(format!("{indices:?} is not closed")));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLoop(format!("{indices:?} repeats a block in consecutive steps")));
        }
        Ok(LoopWord { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of steps `l`.
    pub fn steps(&self) -> usize {
        self.indices.len() - 1
    }

    pub fn start(&self) -> usize {
        self.indices[0]
    }

    fn check(&self, k: usize) -> Result<()> {
        if let Some(&bad) = self.indices.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidLoop(format!("block {} out of {k}", bad + 1)));
        }
        Ok(())
    }
}

impl Serialize for LoopWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.indices.iter().map(|i| i + 1).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LoopWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.contains(&0) {
            return Err(serde::de::Error::custom("loop indices are 1-based"));
        }
        LoopWord::new(v.into_iter().map(|i| i - 1).collect()).map_err(serde::de::Error::custom)
    }
}

fn check_partition<T: Scalar>(p: &Matrix<T>, partition: &[usize]) -> Result<()> {
    let n: usize = partition.iter().sum();
    if !p.is_square() || p.rows() != n {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix for a partition of {n}",
            p.rows(),
            p.cols()
        )));
    }
    Ok(())
}

pub fn tilde_block<T: Scalar>(p: &Matrix<T>, partition: &[usize], i: usize, j: usize) -> Result<Matrix<T>> {
    check_partition(p, partition)?;
    if i == j {
        return Err(Error::DiagonalBlockRequested(i));
    }
    let k = partition.len();
    if i >= k || j >= k {
        return Err(Error::InvalidLoop(format!("block ({}, {}) out of {k}", i + 1, j + 1)));
    }
    let off = offsets(partition);
    Ok(if i < j {
        p.submatrix(off[i], off[j], partition[i], partition[j])
    } else {
        p.submatrix(off[j], off[i], partition[j], partition[i]).adjoint()
    })
}

pub fn loop_product<T: Scalar>(p: &Matrix<T>, partition: &[usize], lp: &LoopWord) -> Result<Matrix<T>> {
    check_partition(p, partition)?;
    lp.check(partition.len())?;
    let mut acc = Matrix::<T>::identity(partition[lp.start()]);
    for w in lp.indices().windows(2) {
        acc = acc.matmul(&tilde_block(p, partition, w[0], w[1])?);
    }
    Ok(acc)
}

/// Characteristic polynomial of the loop product and whether it is real:
/// exactly in exact mode, up to `tol.real` otherwise.
pub fn loop_charpoly_is_real(
    p: MatrixInput<'_>,
    partition: &[usize],
    lp: &LoopWord,
    exact: bool,
    tol: &Tolerances,
) -> Result<(CharPoly, bool)> {
    let poly = match p {
        MatrixInput::Numeric(m) => char_poly(MatrixInput::Numeric(&loop_product(m, partition, lp)?), exact)?,
        MatrixInput::Exact(m) => char_poly(MatrixInput::Exact(&loop_product(m, partition, lp)?), exact)?,
    };
    let real = match &poly {
        CharPoly::Exact(e) => e.is_real(),
        CharPoly::Numeric(c) => c.is_real(tol.real),
    };
    Ok((poly, real))
}

/// `Q = [X, J]` assembled blockwise from `Q_ij = X_ij J_j − J_i X_ij`.
pub fn commutator_blocks<T: Scalar>(x: &Matrix<T>, j: &Matrix<T>, partition: &[usize]) -> Result<Matrix<T>> {
    check_partition(x, partition)?;
    check_partition(j, partition)?;
    let off = offsets(partition);
    let k = partition.len();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let blk = j.submatrix(off[a], off[b], partition[a], partition[b]);
            if blk.data().iter().any(|z| !z.is_zero()) {
                return Err(Error::ShapeMismatch("J is not block-diagonal".into()));
            }
        }
    }
    let n = x.rows();
    let mut q = Matrix::<T>::zeros(n, n);
    for a in 0..k {
        let ja = j.submatrix(off[a], off[a], partition[a], partition[a]);
        for b in 0..k {
            let jb = j.submatrix(off[b], off[b], partition[b], partition[b]);
            let xab = x.submatrix(off[a], off[b], partition[a], partition[b]);
            let qab = xab.matmul(&jb).sub_mat(&ja.matmul(&xab));
            q.set_submatrix(off[a], off[b], &qab);
        }
    }
    Ok(q)
}
