//! Characteristic polynomials `det(λI − A)`, leading coefficient first.
//!
//! Exact mode runs Faddeev–LeVerrier over Gaussian rationals; numeric mode
//! expands `Π (λ − μ_k)` over the computed eigenvalues.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::eigen::eigenvalues;
use super::gaussian::GaussianRational;
use super::matrix::{ComplexMatrix, GaussianRationalMatrix};
use crate::error::{Error, Result};

/// Complex coefficients `[1, c_1, …, c_n]` of `λ^n + c_1 λ^{n−1} + … + c_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCoefficients {
    pub coefficients: Vec<Complex64>,
}

/// Exact counterpart of [`PolynomialCoefficients`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolynomial {
    pub coefficients: Vec<GaussianRational>,
}

impl PolynomialCoefficients {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn max_imag(&self) -> f64 {
        self.coefficients.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn max_abs_diff(&self, other: &PolynomialCoefficients) -> f64 {
        assert_eq!(self.coefficients.len(), other.coefficients.len());
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl ExactPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_real(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_real())
    }

    /// Index of the first coefficient with a nonzero imaginary part.
    pub fn first_non_real(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !c.is_real())
    }

    pub fn to_numeric(&self) -> PolynomialCoefficients {
        PolynomialCoefficients {
            coefficients: self.coefficients.iter().map(|c| c.to_complex()).collect(),
        }
    }

    /// Human-readable form in the variable `λ`, e.g. `λ^2 + 2iλ`.
    pub fn to_pretty(&self) -> String {
        use num_traits::Signed;
        let n = self.degree();
        let mut out = String::new();
        for (r, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = n - r;
            let mono = match power {
                0 => String::new(),
                1 => "λ".to_string(),
                p => format!("λ^{p}"),
            };
            let negative = (c.im.is_zero() && c.re.is_negative())
                || (c.re.is_zero() && c.im.is_negative());
            let mag = if negative { -c.clone() } else { c.clone() };
            let coef = if mag.is_one() && power > 0 {
                String::new()
            } else if !mag.re.is_zero() && !mag.im.is_zero() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&coef);
            out.push_str(&mono);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Input to [`char_poly`]: a floating-point or an exact matrix.
#[derive(Clone, Debug)]
pub enum MatrixInput<'a> {
    Numeric(&'a ComplexMatrix),
    Exact(&'a GaussianRationalMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CharPoly {
    Numeric(PolynomialCoefficients),
    Exact(ExactPolynomial),
}

/// Dispatching entry point; `exact` on a floating-point input is an error.
pub fn char_poly(m: MatrixInput<'_>, exact: bool) -> Result<CharPoly> {
    match (m, exact) {
        (MatrixInput::Exact(a), true) => Ok(CharPoly::Exact(char_poly_exact(a)?)),
        (MatrixInput::Exact(a), false) => Ok(CharPoly::Numeric(char_poly_numeric(&a.to_complex())?)),
        (MatrixInput::Numeric(a), false) => Ok(CharPoly::Numeric(char_poly_numeric(a)?)),
        (MatrixInput::Numeric(_), true) => Err(Error::ExactModeOnInexactInput),
    }
}

/// Faddeev–LeVerrier: `M_k = A M_{k−1} + c_{k−1} I`, `c_k = −tr(A M_k)/k`.
pub fn char_poly_exact(a: &GaussianRationalMatrix) -> Result<ExactPolynomial> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut coefficients = vec![GaussianRational::one()];
    let mut m = GaussianRationalMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.matmul(&m);
        let prev = coefficients[k - 1].clone();
        for i in 0..n {
            let slot = next.get_mut(i, i);
            *slot = slot.clone() + prev.clone();
        }
        m = next;
        let c = -a.matmul(&m).trace().div_int(k as i64);
        coefficients.push(c);
    }
    Ok(ExactPolynomial { coefficients })
}

pub fn char_poly_numeric(a: &ComplexMatrix) -> Result<PolynomialCoefficients> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let eig = eigenvalues(a)?;
    Ok(poly_from_roots(&eig))
}

/// Monic polynomial with the given roots.
pub fn poly_from_roots(roots: &[Complex64]) -> PolynomialCoefficients {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &mu in roots {
        let mut next = c.clone();
        next.push(Complex64::new(0.0, 0.0));
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] -= mu * ck;
        }
        c = next;
    }
    PolynomialCoefficients { coefficients: c }
}
