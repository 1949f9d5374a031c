//! Generalized Cartan decompositions `U(n) = L·B·H` for pairs of block-diagonal
//! subgroups `L = U(n₁)×…×U(n_k)`, `H = U(m₁)×…×U(m_l)`, and invariant-theoretic
//! certificates for the pairs where `L·O(n)·H` misses part of `U(n)`.

pub mod blocks;
pub mod certificates;
pub mod csd;
pub mod error;
pub mod herringbone;
pub mod linalg;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
