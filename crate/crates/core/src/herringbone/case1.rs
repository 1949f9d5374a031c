//! Alternating rank-one stitches for `L = U(1)×U(n₂)×U(n₃)`, `H = U(p)×U(q)`.
//!
//! Even stage `i` splits the active block along `{i} | rest` against
//! `H ∩ window = U(p−i)×U(q−i)`; odd stage `i` splits along
//! `L ∩ window = U(n₂−i)×U(n₃−i)` against `rest | {n−1−i}`. Each stitch
//! leaves an active block one coordinate smaller, with the removed coordinate
//! pinned to exactly 1.

use crate::csd::{cs_decompose_rank1_left, cs_decompose_rank1_right, BipartitionPair};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};
use crate::tolerance::Tolerances;

use super::word::{Letter, PlaneRotationWord};
use super::Factors;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Even,
    Odd,
    Done,
}

/// Recursion state. Invariant: `g = left · C₁⋯C_c · middle · B_b⋯B₁ · right`
/// with `middle` the identity outside `window`.
#[derive(Clone, Debug)]
pub struct HerringboneState {
    pub n: usize,
    pub n2: usize,
    pub n3: usize,
    pub p: usize,
    pub q: usize,
    pub stage: usize,
    pub phase: Phase,
    /// Half-open coordinate range of the active block.
    pub window: (usize, usize),
    pub middle: ComplexMatrix,
    pub left: ComplexMatrix,
    pub right: ComplexMatrix,
    pub b_letters: Vec<Letter>,
    pub c_letters: Vec<Letter>,
}

fn embed(n: usize, at: usize, block: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(n);
    m.set_submatrix(at, at, block);
    m
}

impl HerringboneState {
    /// `lparts = (1, n₂, n₃)`, `hparts = (p, q)`.
    pub fn new(g: &UnitaryMatrix, n2: usize, n3: usize, p: usize, q: usize) -> Self {
        let n = g.n();
        HerringboneState {
            n,
            n2,
            n3,
            p,
            q,
            stage: 0,
            phase: Phase::Even,
            window: (0, n),
            middle: g.as_matrix().clone(),
            left: ComplexMatrix::identity(n),
            right: ComplexMatrix::identity(n),
            b_letters: Vec::new(),
            c_letters: Vec::new(),
        }
    }

    fn active(&self) -> UnitaryMatrix {
        let (a, b) = self.window;
        UnitaryMatrix::new_unchecked(self.middle.submatrix(a, a, b - a, b - a))
    }

    /// Performs one stitch; returns `false` once the recursion has ended.
    pub fn step(&mut self) -> Result<bool> {
        let i = self.stage;
        let n = self.n;
        match self.phase {
            Phase::Done => Ok(false),
            Phase::Even => {
                if self.p <= i || self.q <= i {
                    self.right = self.middle.matmul(&self.right);
                    self.finish();
                    return Ok(false);
                }
                let size = n - 2 * i;
                let parts = BipartitionPair::new((1, size - 1), (self.p - i, self.q - i))?;
                let r = cs_decompose_rank1_left(&self.active(), &parts)?;
                self.right = embed(n, i, &r.right).matmul(&self.right);
                self.b_letters.push(Letter::new(i, n - 1 - i, r.angles[0]));
                self.window = (i + 1, n - i);
                let (a, b) = self.window;
                self.middle = embed(n, a, &r.left.submatrix(1, 1, b - a, b - a));
                self.phase = Phase::Odd;
                Ok(true)
            }
            Phase::Odd => {
                if self.n2 <= i || self.n3 <= i {
                    self.left = self.left.matmul(&self.middle);
                    self.finish();
                    return Ok(false);
                }
                let size = n - 2 * i - 1;
                let parts = BipartitionPair::new((self.n2 - i, self.n3 - i), (size - 1, 1))?;
                let r = cs_decompose_rank1_right(&self.active(), &parts)?;
                self.left = self.left.matmul(&embed(n, i + 1, &r.left));
                self.c_letters.push(Letter::new(i + 1, n - 1 - i, r.angles[0]));
                self.window = (i + 1, n - 1 - i);
                let (a, b) = self.window;
                self.middle = embed(n, a, &r.right.submatrix(0, 0, b - a, b - a));
                self.stage += 1;
                self.phase = Phase::Even;
                Ok(true)
            }
        }
    }

    fn finish(&mut self) {
        self.middle = ComplexMatrix::identity(self.n);
        self.window = (self.window.0, self.window.0);
        self.phase = Phase::Done;
    }

    /// `C₁⋯C_c B_b⋯B₁`.
    pub fn word(&self) -> PlaneRotationWord {
        let letters = self
            .c_letters
            .iter()
            .chain(self.b_letters.iter().rev())
            .copied()
            .collect();
        PlaneRotationWord::new(self.n, letters)
    }

    /// Current value of `left · word · middle-in-place · right`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let c = PlaneRotationWord::new(self.n, self.c_letters.clone()).eval();
        let b = PlaneRotationWord::new(self.n, self.b_letters.iter().rev().copied().collect()).eval();
        self.left.matmul(&c).matmul(&self.middle).matmul(&b).matmul(&self.right)
    }
}

pub(super) fn run(g: &UnitaryMatrix, n2: usize, n3: usize, p: usize, q: usize, _tol: &Tolerances) -> Result<Factors> {
    let mut st = HerringboneState::new(g, n2, n3, p, q);
    while st.step()? {}
    Ok(Factors {
        word: st.word(),
        left: st.left,
        right: st.right,
    })
}
