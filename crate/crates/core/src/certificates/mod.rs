//! Evidence that `L · O(n) · H ≠ U(n)`.
//!
//! If `L · O(n) · H = U(n)`, every `Ad(g)J` with `J` real diagonal and
//! `G_J ≅ H` is `Ad(L)`-conjugate to a real matrix, so every loop polynomial
//! of it is real. A certificate exhibits `X` skew-Hermitian such that the
//! loop polynomial at `Q = [X, J]` is not real, and confirms numerically that
//! the same happens along `Ad(exp(εX))J` for a concrete small `ε`.

pub mod epsilon;
pub mod loops;
pub mod witness;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herringbone::{classify, TripleSpec};
use crate::linalg::charpoly::char_poly_exact;
use crate::linalg::{ExactPolynomial, GaussianRational, GaussianRationalMatrix, PolynomialCoefficients};
use crate::tolerance::Tolerances;

pub use epsilon::{convergence_check, epsilon_search, ConvergenceReport, EpsilonHit};
pub use loops::{commutator_blocks, loop_charpoly_is_real, loop_product, tilde_block, LoopWord};
pub use witness::{WitnessData, WitnessKind};

/// Real diagonal `J` whose stabilizer is conjugate to `H` under `O(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProjection {
    #[serde(rename = "J")]
    pub j: GaussianRationalMatrix,
    pub target_multiplicities: Vec<usize>,
}

impl ReferenceProjection {
    /// Multiplicities of the distinct diagonal values, or `None` if `J` is
    /// not real diagonal.
    pub fn value_multiplicities(&self) -> Option<Vec<usize>> {
        let n = self.j.rows();
        if !self.j.is_square() || !self.j.is_real() {
            return None;
        }
        let mut counts: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let v = self.j.get(a, b);
                if a != b && !num_traits::Zero::is_zero(v) {
                    return None;
                }
            }
            let v = &self.j.get(a, a).re;
            *counts.entry((v.numer().clone(), v.denom().clone())).or_default() += 1;
        }
        Some(counts.into_values().collect())
    }

    pub fn realizes_target(&self) -> bool {
        let Some(mut got) = self.value_multiplicities() else {
            return false;
        };
        let mut want = self.target_multiplicities.clone();
        got.sort_unstable();
        want.sort_unstable();
        got == want
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonSurjectivityCertificate {
    pub spec: TripleSpec,
    /// Spec the witness is built for: sides possibly exchanged, `L` blocks
    /// possibly reordered and merged.
    pub working_spec: TripleSpec,
    pub swapped: bool,
    pub witness: WitnessKind,
    pub reductions: Vec<String>,
    #[serde(flatten)]
    pub projection: ReferenceProjection,
    #[serde(rename = "X")]
    pub x: GaussianRationalMatrix,
    #[serde(rename = "loop")]
    pub loop_word: LoopWord,
    pub z: GaussianRational,
    pub charpoly_exact: ExactPolynomial,
    pub epsilon: f64,
    pub charpoly_numeric: PolynomialCoefficients,
    pub flagged_index: usize,
    #[serde(with = "crate::linalg::json::complex")]
    pub rescaled_flagged: num_complex::Complex64,
    pub convergence: ConvergenceReport,
}

pub fn default_z() -> GaussianRational {
    GaussianRational::i()
}

fn check_z(z: &GaussianRational) -> Result<()> {
    if z.is_real() {
        return Err(Error::PreconditionViolated(format!("z = {z} is real")));
    }
    Ok(())
}

/// Number of halvings after the hit used for the convergence report.
pub const CONVERGENCE_HALVINGS: usize = 8;

/// Exact loop polynomial at `Q = [X, J]` and its first non-real coefficient.
fn exact_poly(w: &WitnessData) -> Result<(ExactPolynomial, usize)> {
    let partition = w.working.lparts();
    let q = commutator_blocks(&w.x, &w.j, partition)?;
    let poly = char_poly_exact(&loop_product(&q, partition, &w.loop_word)?)?;
    let flagged = poly
        .first_non_real()
        .ok_or_else(|| Error::PreconditionViolated("loop polynomial at Q is real".into()))?;
    Ok((poly, flagged))
}

fn build(spec: &TripleSpec, swapped: bool, w: WitnessData, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    let partition = w.working.lparts().to_vec();
    let (poly, flagged) = exact_poly(&w)?;
    let jc = w.j.to_complex();
    let xc = w.x.to_complex();
    let hit = epsilon_search(&jc, &xc, &partition, &w.loop_word, flagged, tol)?;
    let target = poly.coefficients[flagged].to_complex();
    let convergence = convergence_check(
        &jc,
        &xc,
        &partition,
        &w.loop_word,
        flagged,
        target,
        hit.epsilon,
        CONVERGENCE_HALVINGS,
        tol,
    )?;
    Ok(NonSurjectivityCertificate {
        spec: spec.clone(),
        swapped,
        witness: w.kind,
        reductions: w.reductions,
        projection: ReferenceProjection {
            j: w.j,
            target_multiplicities: w.working.hparts().to_vec(),
        },
        working_spec: w.working,
        x: w.x,
        loop_word: w.loop_word,
        z: z.clone(),
        charpoly_exact: poly,
        epsilon: hit.epsilon,
        charpoly_numeric: hit.charpoly,
        flagged_index: flagged,
        rescaled_flagged: hit.rescaled,
        convergence,
    })
}

fn guard_surjective(spec: &TripleSpec) -> Result<()> {
    if classify(spec).is_surjective() {
        return Err(Error::SpecActuallySurjective);
    }
    Ok(())
}

pub fn witness_three_by_three(spec: &TripleSpec, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    guard_surjective(spec)?;
    check_z(z)?;
    build(spec, false, witness::three_by_three(spec, z)?, z, tol)
}

pub fn witness_k3_pq_large(spec: &TripleSpec, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    check_z(z)?;
    build(spec, false, witness::k3_pq_large(spec, z)?, z, tol)
}

pub fn witness_k4_pq2(spec: &TripleSpec, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    check_z(z)?;
    build(spec, false, witness::k4_pq2(spec, z)?, z, tol)
}

pub fn witness_k4_pq_large(spec: &TripleSpec, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    check_z(z)?;
    build(spec, false, witness::k4_pq_large(spec, z)?, z, tol)
}

/// Which construction covers a non-surjective spec, and whether the sides
/// must be exchanged first.
pub fn dispatch(spec: &TripleSpec) -> Result<(WitnessKind, bool)> {
    if classify(spec).is_surjective() {
        return Err(Error::SpecActuallySurjective);
    }
    if spec.k() >= 3 && spec.l() >= 3 {
        return Ok((WitnessKind::ThreeByThree, false));
    }
    let swapped = spec.l() != 2;
    let w = if swapped { spec.swapped() } else { spec.clone() };
    let kind = match (w.k(), w.min_l(), w.min_h()) {
        (3, nn, mm) if nn >= 2 && mm >= 3 => WitnessKind::K3PqLarge,
        (k, _, 2) if k >= 4 => WitnessKind::K4Pq2,
        (k, _, mm) if k >= 4 && mm >= 3 => WitnessKind::K4PqLarge,
        _ => return Err(Error::DispatchGap(spec.to_string())),
    };
    Ok((kind, swapped))
}

pub fn certify_nonsurjective(spec: &TripleSpec) -> Result<NonSurjectivityCertificate> {
    certify_nonsurjective_with(spec, &default_z(), &Tolerances::default())
}

fn dispatched_witness(spec: &TripleSpec, z: &GaussianRational) -> Result<(WitnessData, bool)> {
    check_z(z)?;
    let (kind, swapped) = dispatch(spec)?;
    let w = if swapped { spec.swapped() } else { spec.clone() };
    let mut data = match kind {
        WitnessKind::ThreeByThree => witness::three_by_three(&w, z)?,
        WitnessKind::K3PqLarge => witness::k3_pq_large(&w, z)?,
        WitnessKind::K4Pq2 => witness::k4_pq2(&w, z)?,
        WitnessKind::K4PqLarge => witness::k4_pq_large(&w, z)?,
    };
    if swapped {
        data.reductions.insert(0, "exchanged L and H".into());
    }
    Ok((data, swapped))
}

pub fn certify_nonsurjective_with(spec: &TripleSpec, z: &GaussianRational, tol: &Tolerances) -> Result<NonSurjectivityCertificate> {
    let (data, swapped) = dispatched_witness(spec, z)?;
    build(spec, swapped, data, z, tol)
}

/// The exact half of a certificate, without the numeric search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactCertificate {
    pub spec: TripleSpec,
    pub working_spec: TripleSpec,
    pub swapped: bool,
    pub witness: WitnessKind,
    pub reductions: Vec<String>,
    #[serde(flatten)]
    pub projection: ReferenceProjection,
    #[serde(rename = "X")]
    pub x: GaussianRationalMatrix,
    #[serde(rename = "loop")]
    pub loop_word: LoopWord,
    pub z: GaussianRational,
    pub charpoly_exact: ExactPolynomial,
    pub flagged_index: usize,
}

pub fn certify_exact(spec: &TripleSpec, z: &GaussianRational) -> Result<ExactCertificate> {
    let (w, swapped) = dispatched_witness(spec, z)?;
    let (poly, flagged) = exact_poly(&w)?;
    Ok(ExactCertificate {
        spec: spec.clone(),
        swapped,
        witness: w.kind,
        reductions: w.reductions,
        projection: ReferenceProjection {
            j: w.j,
            target_multiplicities: w.working.hparts().to_vec(),
        },
        working_spec: w.working,
        x: w.x,
        loop_word: w.loop_word,
        z: z.clone(),
        charpoly_exact: poly,
        flagged_index: flagged,
    })
}

/// Independent re-check of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub working_spec_ok: bool,
    pub x_skew_hermitian: bool,
    pub j_realizes_h: bool,
    pub exact_poly_matches: bool,
    pub exact_poly_non_real: bool,
    pub numeric_flag_ok: bool,
    pub passed: bool,
}

fn coarsens(fine: &[usize], coarse: &[usize]) -> bool {
    let mut acc = 0;
    let mut it = coarse.iter();
    let Some(mut target) = it.next().copied() else {
        return fine.is_empty();
    };
    for &f in fine {
        acc += f;
        if acc == target {
            acc = 0;
            target = match it.next() {
                Some(&t) => t,
                None => usize::MAX,
            };
        } else if acc > target {
            return false;
        }
    }
    acc == 0 && target == usize::MAX
}

/// Whether `coarse` is obtained from some reordering of `fine` by merging
/// neighbours, which is all the witnesses ever do.
fn is_coarsening_up_to_order(fine: &[usize], coarse: &[usize]) -> bool {
    let mut sorted = fine.to_vec();
    sorted.sort_unstable();
    coarsens(fine, coarse) || coarsens(&sorted, coarse)
}

pub fn check_certificate(cert: &NonSurjectivityCertificate, tol: &Tolerances) -> Result<CertificateCheck> {
    let base = if cert.swapped { cert.spec.swapped() } else { cert.spec.clone() };
    let w = &cert.working_spec;
    let working_spec_ok = w.n() == base.n()
        && is_coarsening_up_to_order(base.lparts(), w.lparts())
        && coarsens(base.hparts(), w.hparts());
    let x = &cert.x;
    let x_skew_hermitian = x.is_square() && x.add_mat(&x.adjoint()).data().iter().all(num_traits::Zero::is_zero);
    let j_realizes_h = cert.projection.realizes_target()
        && {
            let mut a = cert.projection.target_multiplicities.clone();
            let mut b = w.hparts().to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        };
    let partition = w.lparts();
    let q = commutator_blocks(x, &cert.projection.j, partition)?;
    let poly = char_poly_exact(&loop_product(&q, partition, &cert.loop_word)?)?;
    let exact_poly_matches = poly == cert.charpoly_exact;
    let exact_poly_non_real = poly.first_non_real() == Some(cert.flagged_index);
    let numeric_flag_ok = x_skew_hermitian && {
        let (_, rescaled) = epsilon::rescaled_coefficient(
            &cert.projection.j.to_complex(),
            &x.to_complex(),
            partition,
            &cert.loop_word,
            cert.flagged_index,
            cert.epsilon,
            tol,
        )?;
        rescaled.im.abs() >= tol.cert
    };
    let passed = working_spec_ok && x_skew_hermitian && j_realizes_h && exact_poly_matches && exact_poly_non_real && numeric_flag_ok;
    Ok(CertificateCheck {
        working_spec_ok,
        x_skew_hermitian,
        j_realizes_h,
        exact_poly_matches,
        exact_poly_non_real,
        numeric_flag_ok,
        passed,
    })
}
