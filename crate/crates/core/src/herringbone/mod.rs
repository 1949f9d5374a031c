//! Classification of triples and the decomposition `g = l · b · h` with
//! `l ∈ L`, `h ∈ H` and `b` a word of real plane rotations.

mod case2;
pub mod case1;
pub mod case3;
pub mod spec;
pub mod verify;
pub mod word;

use serde::{Deserialize, Serialize};

use crate::csd::{cs_decompose_with, BipartitionPair};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, UnitaryMatrix};
use crate::tolerance::Tolerances;

pub use case1::HerringboneState;
pub use spec::{classify, CaseKind, CaseLabel, Normalization, TripleSpec};
pub use verify::{verify, verify_with, VerificationReport};
pub use word::{Letter, PlaneRotationWord};

/// Factors produced by an engine in its own coordinates.
pub(crate) struct Factors {
    pub left: ComplexMatrix,
    pub word: PlaneRotationWord,
    pub right: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionResult {
    pub left: UnitaryMatrix,
    pub word: PlaneRotationWord,
    pub right: UnitaryMatrix,
    pub case: CaseLabel,
    pub residual: f64,
}

#[derive(Serialize, Deserialize)]
struct ResultWire {
    #[serde(flatten)]
    case: CaseLabel,
    word: Vec<Letter>,
    left: UnitaryMatrix,
    right: UnitaryMatrix,
    residual: f64,
}

impl Serialize for DecompositionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ResultWire {
            case: self.case.clone(),
            word: self.word.letters.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            residual: self.residual,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecompositionResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ResultWire::deserialize(d)?;
        let n = w.left.n();
        if w.right.n() != n {
            return Err(serde::de::Error::custom("left and right sizes differ"));
        }
        if w.word.iter().any(|l| l.j >= n) {
            return Err(serde::de::Error::custom("word letter outside the matrix"));
        }
        Ok(DecompositionResult {
            word: PlaneRotationWord::new(n, w.word),
            left: w.left,
            right: w.right,
            case: w.case,
            residual: w.residual,
        })
    }
}

impl DecompositionResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.left.matmul(&self.word.eval()).matmul(&self.right)
    }
}

/// Word length and plane list a case produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BShape {
    pub length: usize,
    pub planes: Vec<(usize, usize)>,
}

fn case1_planes(n: usize, n2: usize, n3: usize, p: usize, q: usize) -> Vec<(usize, usize)> {
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut i = 0;
    loop {
        if p <= i || q <= i {
            break;
        }
        b.push((i, n - 1 - i));
        if n2 <= i || n3 <= i {
            break;
        }
        c.push((i + 1, n - 1 - i));
        i += 1;
    }
    c.into_iter().chain(b.into_iter().rev()).collect()
}

fn canonical_planes(kind: CaseKind, w: &TripleSpec) -> Result<Vec<(usize, usize)>> {
    let n = w.n();
    let lp = w.lparts();
    let hp = w.hparts();
    Ok(match kind {
        CaseKind::Case0 => {
            let r = lp[0].min(lp[1]).min(hp[0]).min(hp[1]);
            (0..r).map(|i| (i, n - 1 - i)).collect()
        }
        CaseKind::CaseI => case1_planes(n, lp[1], lp[2], hp[0], hp[1]),
        CaseKind::CaseII => {
            let inner_spec = case2::window_spec(lp[1], lp[2]);
            let inner = b_shape(&classify(&inner_spec), &inner_spec)?;
            let n1 = lp[0];
            inner
                .planes
                .into_iter()
                .map(|(a, b)| (a + n1, b + n1))
                .chain([(0, n - 1), (1, n - 2)])
                .collect()
        }
        CaseKind::CaseIII => {
            let off = crate::blocks::offsets(lp);
            (1..lp.len()).map(|j| (0, off[j])).collect()
        }
        _ => return Err(Error::NotApplicable(format!("no word shape for {kind}"))),
    })
}

/// Expected word length and planes, in the coordinates of `spec`.
pub fn b_shape(case: &CaseLabel, spec: &TripleSpec) -> Result<BShape> {
    let norm = case
        .normalization
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("non-surjective spec has no decomposition".into()))?;
    let working = case.working_spec(spec)?;
    let planes = canonical_planes(case.kind.base(), &working)?;
    let mut planes: Vec<(usize, usize)> = planes
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (norm.perm[a], norm.perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    if norm.swapped {
        planes.reverse();
    }
    Ok(BShape {
        length: planes.len(),
        planes,
    })
}

pub fn decompose(g: &UnitaryMatrix, spec: &TripleSpec) -> Result<DecompositionResult> {
    decompose_with(g, spec, &Tolerances::default())
}

fn check_size(g: &UnitaryMatrix, spec: &TripleSpec) -> Result<()> {
    if g.n() != spec.n() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix for n = {}", g.n(), g.n(), spec.n())));
    }
    Ok(())
}

fn run_engine(kind: CaseKind, g: &UnitaryMatrix, w: &TripleSpec, tol: &Tolerances) -> Result<Factors> {
    let lp = w.lparts();
    let hp = w.hparts();
    match kind {
        CaseKind::Case0 => {
            let parts = BipartitionPair::new((lp[0], lp[1]), (hp[0], hp[1]))?;
            let r = cs_decompose_with(g, &parts, tol)?;
            let word = PlaneRotationWord::new(
                g.n(),
                r.planes()
                    .into_iter()
                    .zip(&r.angles)
                    .map(|((i, j), &t)| Letter::new(i, j, t))
                    .collect(),
            );
            Ok(Factors {
                left: r.left.into_matrix(),
                word,
                right: r.right.into_matrix(),
            })
        }
        CaseKind::CaseI => case1::run(g, lp[1], lp[2], hp[0], hp[1], tol),
        CaseKind::CaseII => case2::run(g, lp, tol),
        CaseKind::CaseIII => case3::run(g, lp),
        _ => Err(Error::NotSurjectiveSpec),
    }
}

fn assemble(g: &UnitaryMatrix, case: CaseLabel, f: Factors) -> DecompositionResult {
    let left = UnitaryMatrix::new_unchecked(f.left);
    let right = UnitaryMatrix::new_unchecked(f.right);
    let residual = left
        .matmul(&f.word.eval())
        .matmul(&right)
        .sub_mat(g)
        .frobenius_norm();
    DecompositionResult {
        left,
        word: f.word,
        right,
        case,
        residual,
    }
}

pub fn decompose_with(g: &UnitaryMatrix, spec: &TripleSpec, tol: &Tolerances) -> Result<DecompositionResult> {
    check_size(g, spec)?;
    let case = classify(spec);
    let Some(norm) = case.normalization.clone() else {
        return Err(Error::NotSurjectiveSpec);
    };
    let working = case.working_spec(spec)?;
    let src = if norm.swapped { g.inverse() } else { g.clone() };
    let gp = UnitaryMatrix::new_unchecked(src.permute_symmetric(&norm.perm));
    let f = run_engine(case.kind.base(), &gp, &working, tol)?;
    let mut f = Factors {
        left: f.left.unpermute_symmetric(&norm.perm),
        word: f.word.permuted(&norm.perm),
        right: f.right.unpermute_symmetric(&norm.perm),
    };
    if norm.swapped {
        f = Factors {
            left: f.right.adjoint(),
            word: f.word.inverse(),
            right: f.left.adjoint(),
        };
    }
    Ok(assemble(g, case, f))
}

fn direct(kind: CaseKind, g: &UnitaryMatrix, spec: &TripleSpec, ok: bool, what: &str) -> Result<DecompositionResult> {
    check_size(g, spec)?;
    if !ok {
        return Err(Error::PreconditionViolated(format!("{what}, got {spec}")));
    }
    let label = CaseLabel {
        kind,
        normalization: Some(Normalization {
            perm: (0..spec.n()).collect(),
            perm_l: (0..spec.k()).collect(),
            perm_h: (0..spec.l()).collect(),
            swapped: false,
        }),
    };
    let f = run_engine(kind, g, spec, &Tolerances::default())?;
    Ok(assemble(g, label, f))
}

/// Case I engine on an already normalized spec `(1, n₂, n₃) / (p, q)`.
pub fn decompose_case1(g: &UnitaryMatrix, spec: &TripleSpec) -> Result<DecompositionResult> {
    let ok = spec.k() == 3 && spec.lparts()[0] == 1 && spec.l() == 2;
    direct(CaseKind::CaseI, g, spec, ok, "needs l-parts (1, n2, n3) and two h-parts")
}

/// Case II engine on an already normalized spec `(n₁, n₂, n₃) / (2, n−2)`.
pub fn decompose_case2(g: &UnitaryMatrix, spec: &TripleSpec) -> Result<DecompositionResult> {
    let ok = spec.k() == 3 && spec.min_l() >= 2 && spec.hparts() == [2, spec.n() - 2];
    direct(CaseKind::CaseII, g, spec, ok, "needs three l-parts of size >= 2 and h-parts (2, n-2)")
}

/// Case III engine on an already normalized spec `(n₁, …, n_k) / (1, n−1)`.
pub fn decompose_case3(g: &UnitaryMatrix, spec: &TripleSpec) -> Result<DecompositionResult> {
    let ok = spec.hparts() == [1, spec.n() - 1];
    direct(CaseKind::CaseIII, g, spec, ok, "needs h-parts (1, n-1)")
}
