//! Dense complex linear algebra and exact Gaussian-rational arithmetic.

pub mod charpoly;
pub mod eigen;
pub mod expm;
pub mod gaussian;
pub mod haar;
pub mod json;
pub mod matrix;
pub mod qr;
pub mod rotation;
pub mod svd;
pub mod unitary;

pub use charpoly::{char_poly, char_poly_exact, char_poly_numeric, CharPoly, ExactPolynomial, MatrixInput, PolynomialCoefficients};
pub use expm::expm_skew_hermitian;
pub use gaussian::GaussianRational;
pub use haar::haar_unitary;
pub use matrix::{ComplexMatrix, GaussianRationalMatrix, Matrix, Scalar};
pub use rotation::plane_rotation;
pub use svd::{svd, Svd};
pub use unitary::UnitaryMatrix;
