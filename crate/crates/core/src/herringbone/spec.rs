use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::block_labels;
use crate::error::{Error, Result};

/// `(U(n), U(n₁)×…×U(n_k), U(m₁)×…×U(m_l))`, blocks along consecutive coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct TripleSpec {
    n: usize,
    lparts: Vec<usize>,
    hparts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SpecWire {
    n: usize,
    lparts: Vec<usize>,
    hparts: Vec<usize>,
}

impl TryFrom<SpecWire> for TripleSpec {
    type Error = Error;
    fn try_from(w: SpecWire) -> Result<Self> {
        let s = TripleSpec::new(w.lparts, w.hparts)?;
        if s.n != w.n {
            return Err(Error::InvalidSpec(format!("n = {} but parts sum to {}", w.n, s.n)));
        }
        Ok(s)
    }
}

impl From<TripleSpec> for SpecWire {
    fn from(s: TripleSpec) -> Self {
        SpecWire {
            n: s.n,
            lparts: s.lparts,
            hparts: s.hparts,
        }
    }
}

impl TripleSpec {
    pub fn new(lparts: Vec<usize>, hparts: Vec<usize>) -> Result<Self> {
        if lparts.len() < 2 || hparts.len() < 2 {
            return Err(Error::InvalidSpec("each side needs at least two blocks".into()));
        }
        if lparts.iter().chain(&hparts).any(|&p| p == 0) {
            return Err(Error::InvalidSpec("empty block".into()));
        }
        let n: usize = lparts.iter().sum();
        let m: usize = hparts.iter().sum();
        if n != m {
            return Err(Error::InvalidSpec(format!("l-parts sum to {n}, h-parts to {m}")));
        }
        Ok(TripleSpec { n, lparts, hparts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lparts(&self) -> &[usize] {
        &self.lparts
    }

    pub fn hparts(&self) -> &[usize] {
        &self.hparts
    }

    pub fn k(&self) -> usize {
        self.lparts.len()
    }

    pub fn l(&self) -> usize {
        self.hparts.len()
    }

    /// `N = min nᵢ`.
    pub fn min_l(&self) -> usize {
        *self.lparts.iter().min().unwrap()
    }

    /// `M = min mⱼ`.
    pub fn min_h(&self) -> usize {
        *self.hparts.iter().min().unwrap()
    }

    /// Exchanges the roles of `L` and `H`.
    pub fn swapped(&self) -> TripleSpec {
        TripleSpec {
            n: self.n,
            lparts: self.hparts.clone(),
            hparts: self.lparts.clone(),
        }
    }

    /// Spec seen after conjugating by the coordinate permutation `perm`
    /// (new coordinate `a` is old coordinate `perm[a]`), together with the
    /// block order on each side. Fails if some block is not kept contiguous.
    pub fn permuted(&self, perm: &[usize]) -> Result<(TripleSpec, Vec<usize>, Vec<usize>)> {
        let (lp, lo) = permuted_parts(&self.lparts, perm)?;
        let (hp, ho) = permuted_parts(&self.hparts, perm)?;
        Ok((TripleSpec::new(lp, hp)?, lo, ho))
    }
}

impl fmt::Display for TripleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "n={} L=({}) H=({})", self.n, join(&self.lparts), join(&self.hparts))
    }
}

fn permuted_parts(parts: &[usize], perm: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let labels = block_labels(parts);
    if perm.len() != labels.len() {
        return Err(Error::InvalidSpec(format!("permutation of length {} for n = {}", perm.len(), labels.len())));
    }
    let mut new_parts = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    for &c in perm {
        let b = labels[c];
        if order.last() == Some(&b) {
            *new_parts.last_mut().unwrap() += 1;
        } else if order.contains(&b) {
            return Err(Error::InvalidSpec("permutation splits a block".into()));
        } else {
            order.push(b);
            new_parts.push(1);
        }
    }
    Ok((new_parts, order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    #[serde(rename = "0")]
    Case0,
    #[serde(rename = "I")]
    CaseI,
    #[serde(rename = "II")]
    CaseII,
    #[serde(rename = "III")]
    CaseIII,
    #[serde(rename = "I'")]
    CaseIPrime,
    #[serde(rename = "II'")]
    CaseIIPrime,
    #[serde(rename = "III'")]
    CaseIIIPrime,
    #[serde(rename = "NotSurjective")]
    NotSurjective,
}

impl CaseKind {
    pub const SURJECTIVE: [CaseKind; 7] = [
        CaseKind::Case0,
        CaseKind::CaseI,
        CaseKind::CaseIPrime,
        CaseKind::CaseII,
        CaseKind::CaseIIPrime,
        CaseKind::CaseIII,
        CaseKind::CaseIIIPrime,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseKind::Case0 => "0",
            CaseKind::CaseI => "I",
            CaseKind::CaseII => "II",
            CaseKind::CaseIII => "III",
            CaseKind::CaseIPrime => "I'",
            CaseKind::CaseIIPrime => "II'",
            CaseKind::CaseIIIPrime => "III'",
            CaseKind::NotSurjective => "NotSurjective",
        }
    }

    pub fn is_primed(self) -> bool {
        matches!(self, CaseKind::CaseIPrime | CaseKind::CaseIIPrime | CaseKind::CaseIIIPrime)
    }

    /// Unprimed counterpart.
    pub fn base(self) -> CaseKind {
        match self {
            CaseKind::CaseIPrime => CaseKind::CaseI,
            CaseKind::CaseIIPrime => CaseKind::CaseII,
            CaseKind::CaseIIIPrime => CaseKind::CaseIII,
            other => other,
        }
    }

    /// Whether the row of the condition table holds, ignoring precedence.
    pub fn row_matches(self, spec: &TripleSpec) -> bool {
        let (k, l, nn, mm) = (spec.k(), spec.l(), spec.min_l(), spec.min_h());
        match self {
            CaseKind::Case0 => k == 2 && l == 2,
            CaseKind::CaseI => k == 3 && nn == 1 && l == 2,
            CaseKind::CaseII => k == 3 && nn >= 2 && l == 2 && mm == 2,
            CaseKind::CaseIII => l == 2 && mm == 1,
            CaseKind::CaseIPrime => k == 2 && l == 3 && mm == 1,
            CaseKind::CaseIIPrime => k == 2 && nn == 2 && l == 3 && mm >= 2,
            CaseKind::CaseIIIPrime => k == 2 && nn == 1,
            CaseKind::NotSurjective => !CaseKind::SURJECTIVE.iter().any(|c| c.row_matches(spec)),
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How the input was brought into the canonical shape of its case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// Coordinate permutation applied to the (possibly swapped) problem:
    /// new coordinate `a` is old coordinate `perm[a]`.
    pub perm: Vec<usize>,
    /// New order of the original `L` blocks.
    #[serde(rename = "permL")]
    pub perm_l: Vec<usize>,
    /// New order of the original `H` blocks.
    #[serde(rename = "permH")]
    pub perm_h: Vec<usize>,
    /// `L` and `H` exchanged, decomposing `g⁻¹`.
    pub swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    #[serde(rename = "case")]
    pub kind: CaseKind,
    pub normalization: Option<Normalization>,
}

impl CaseLabel {
    pub fn is_surjective(&self) -> bool {
        self.kind != CaseKind::NotSurjective
    }

    /// The spec actually decomposed by the unprimed algorithm.
    pub fn working_spec(&self, spec: &TripleSpec) -> Result<TripleSpec> {
        let norm = self
            .normalization
            .as_ref()
            .ok_or_else(|| Error::NotApplicable("no normalization for a non-surjective spec".into()))?;
        let base = if norm.swapped { spec.swapped() } else { spec.clone() };
        Ok(base.permuted(&norm.perm)?.0)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

fn reversal(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// Coordinate permutation putting an unprimed spec into canonical shape.
fn canonical_perm(kind: CaseKind, spec: &TripleSpec) -> Vec<usize> {
    let n = spec.n();
    let lp = spec.lparts();
    let hp = spec.hparts();
    let identity: Vec<usize> = (0..n).collect();
    match kind {
        CaseKind::CaseI => {
            if lp[0] == 1 {
                identity
            } else if lp[2] == 1 {
                reversal(n)
            } else {
                // middle block is the unit one
                let n1 = lp[0];
                if n1 < hp[0] {
                    std::iter::once(n1).chain(0..n1).chain(n1 + 1..n).collect()
                } else {
                    let to_end: Vec<usize> = (0..n1).chain(n1 + 1..n).chain(std::iter::once(n1)).collect();
                    to_end.into_iter().rev().collect()
                }
            }
        }
        CaseKind::CaseII => {
            if hp[0] == 2 {
                identity
            } else {
                reversal(n)
            }
        }
        CaseKind::CaseIII => {
            if hp[0] == 1 {
                identity
            } else {
                reversal(n)
            }
        }
        _ => identity,
    }
}

/// Evaluates the condition table with precedence `0 > I > I′ > II > II′ > III > III′`.
pub fn classify(spec: &TripleSpec) -> CaseLabel {
    let Some(kind) = CaseKind::SURJECTIVE.into_iter().find(|c| c.row_matches(spec)) else {
        return CaseLabel {
            kind: CaseKind::NotSurjective,
            normalization: None,
        };
    };
    let swapped = kind.is_primed();
    let working = if swapped { spec.swapped() } else { spec.clone() };
    let perm = canonical_perm(kind.base(), &working);
    let (_, lo, ho) = working.permuted(&perm).expect("canonical permutations keep blocks contiguous");
    let (perm_l, perm_h) = if swapped { (ho, lo) } else { (lo, ho) };
    CaseLabel {
        kind,
        normalization: Some(Normalization {
            perm,
            perm_l,
            perm_h,
            swapped,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: &[usize], h: &[usize]) -> TripleSpec {
        TripleSpec::new(l.to_vec(), h.to_vec()).unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(classify(&spec(&[2, 2], &[2, 2])).kind, CaseKind::Case0);
        assert_eq!(classify(&spec(&[1, 2, 3], &[3, 3])).kind, CaseKind::CaseI);
        assert_eq!(classify(&spec(&[2, 2, 2], &[2, 4])).kind, CaseKind::CaseII);
        assert_eq!(classify(&spec(&[1, 1, 1, 1], &[2, 2])).kind, CaseKind::NotSurjective);
        let s = spec(&[3, 3], &[1, 5]);
        assert!(CaseKind::CaseIII.row_matches(&s));
        assert_eq!(classify(&s).kind, CaseKind::Case0);
        assert_eq!(classify(&spec(&[2, 5], &[1, 2, 4])).kind, CaseKind::CaseIPrime);
        assert_eq!(classify(&spec(&[2, 2, 3, 1], &[1, 7])).kind, CaseKind::CaseIII);
        assert_eq!(classify(&spec(&[1, 5], &[2, 2, 1, 1])).kind, CaseKind::CaseIIIPrime);
    }

    #[test]
    fn invalid_specs() {
        assert!(TripleSpec::new(vec![3], vec![1, 2]).is_err());
        assert!(TripleSpec::new(vec![1, 2], vec![2, 2]).is_err());
        assert!(TripleSpec::new(vec![0, 3], vec![1, 2]).is_err());
        let bad = r#"{"n":5,"lparts":[1,3],"hparts":[2,2]}"#;
        assert!(serde_json::from_str::<TripleSpec>(bad).is_err());
    }

    #[test]
    fn canonical_shapes_after_normalization() {
        for (l, h) in [
            (vec![1, 2, 3], vec![3, 3]),
            (vec![3, 2, 1], vec![2, 4]),
            (vec![2, 1, 3], vec![4, 2]),
            (vec![2, 1, 3], vec![2, 4]),
            (vec![3, 1, 2], vec![3, 3]),
        ] {
            let s = spec(&l, &h);
            let c = classify(&s);
            assert_eq!(c.kind, CaseKind::CaseI);
            let w = c.working_spec(&s).unwrap();
            assert_eq!(w.lparts()[0], 1, "{s}");
        }
        let s = spec(&[2, 3, 2], &[5, 2]);
        let w = classify(&s).working_spec(&s).unwrap();
        assert_eq!(w.hparts(), &[2, 5]);
        let s = spec(&[2, 3, 2], &[6, 1]);
        let w = classify(&s).working_spec(&s).unwrap();
        assert_eq!(w.hparts(), &[1, 6]);
        let s = spec(&[3, 4], &[2, 1, 4]);
        let c = classify(&s);
        assert!(c.normalization.as_ref().unwrap().swapped);
        assert_eq!(c.working_spec(&s).unwrap().lparts()[0], 1);
    }

    #[test]
    fn block_order_is_recorded() {
        let c = classify(&spec(&[2, 1, 3], &[2, 4]));
        let norm = c.normalization.unwrap();
        assert_eq!(norm.perm_l, vec![1, 2, 0]);
        assert_eq!(norm.perm_h, vec![1, 0]);
    }
}
