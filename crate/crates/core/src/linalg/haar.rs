//! Haar-distributed unitaries and seeded Gaussian test inputs.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, a counter-based
//! stream cipher generator, so a seed fixes the output on every platform.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;
use super::qr::householder_qr;
use super::unitary::UnitaryMatrix;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. standard complex normal (`E|z|² = 1`).
pub fn complex_gaussian_with(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

pub fn complex_gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    complex_gaussian_with(rows, cols, &mut rng_from_seed(seed))
}

/// Random skew-Hermitian matrix `(Z − Z*)/2`.
pub fn random_skew_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let z = complex_gaussian(n, n, seed);
    z.sub_mat(&z.adjoint()).scale(&Complex64::new(0.5, 0.0))
}

/// Haar unitary from a caller-owned stream.
pub fn haar_unitary_with(n: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let z = complex_gaussian_with(n, n, rng);
    let (mut q, r) = householder_qr(&z);
    // Q·diag(r_kk/|r_kk|) so that R has a positive real diagonal.
    for k in 0..n {
        let d = *r.get(k, k);
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            *q.get_mut(i, k) *= phase;
        }
    }
    UnitaryMatrix::new_unchecked(q)
}

pub fn haar_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    haar_unitary_with(n, &mut rng_from_seed(seed))
}
