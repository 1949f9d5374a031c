//! Explicit `(J, X, loop)` triples whose loop polynomial at `Q = [X, J]` is
//! not real. Each construction works on a possibly coarsened or reordered
//! copy of the spec; coarsening only enlarges `L` and `H`, so a witness for
//! the coarse spec also rules out surjectivity for the fine one.

use serde::{Deserialize, Serialize};

use crate::blocks::{merge_trailing, offsets};
use crate::error::{Error, Result};
use crate::herringbone::TripleSpec;
use crate::linalg::{GaussianRational, GaussianRationalMatrix};

use super::loops::LoopWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Both sides with at least three blocks.
    ThreeByThree,
    /// `k = 3`, `min nᵢ ≥ 2`, `H = U(p)×U(q)` with `min(p, q) ≥ 3`.
    K3PqLarge,
    /// `k ≥ 4`, `min(p, q) = 2`.
    K4Pq2,
    /// `k = 4`, `n₁ = n₂ = n₃ = 1`, `min(p, q) ≥ 3`.
    K4PqLarge,
}

#[derive(Clone, Debug)]
pub struct WitnessData {
    pub kind: WitnessKind,
    pub working: TripleSpec,
    pub j: GaussianRationalMatrix,
    pub x: GaussianRationalMatrix,
    pub loop_word: LoopWord,
    pub reductions: Vec<String>,
}

fn int(v: i64) -> GaussianRational {
    GaussianRational::from_ints(v, 0)
}

/// Sets `X[a][b] = v` and `X[b][a] = −v̄`.
fn set_skew(x: &mut GaussianRationalMatrix, a: usize, b: usize, v: GaussianRational) {
    x.set(b, a, -v.conj());
    x.set(a, b, v);
}

fn parts_str(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn precondition(what: &str, spec: &TripleSpec) -> Error {
    Error::PreconditionViolated(format!("{what}, got {spec}"))
}

/// Coarsens both sides to three blocks; `J` takes value `i` on `mᵢ`
/// coordinates with the first coordinate of `L`-block `i` among them.
pub fn three_by_three(spec: &TripleSpec, z: &GaussianRational) -> Result<WitnessData> {
    if spec.k() < 3 || spec.l() < 3 {
        return Err(precondition("needs at least three blocks on both sides", spec));
    }
    let lp = merge_trailing(spec.lparts(), 3);
    let hp = merge_trailing(spec.hparts(), 3);
    let mut reductions = Vec::new();
    if spec.k() > 3 || spec.l() > 3 {
        reductions.push(format!("merged trailing blocks to L=({}) H=({})", parts_str(&lp), parts_str(&hp)));
    }
    let working = TripleSpec::new(lp.clone(), hp.clone())?;
    let n = working.n();
    let off = offsets(&lp);
    let heads = [off[0], off[1], off[2]];

    let mut values = vec![0usize; n];
    for (v, &h) in heads.iter().enumerate() {
        values[h] = v + 1;
    }
    let mut rest = (0..3).flat_map(|v| std::iter::repeat_n(v + 1, hp[v] - 1));
    for slot in values.iter_mut().filter(|s| **s == 0) {
        *slot = rest.next().expect("counts add up");
    }
    let j = GaussianRationalMatrix::diag(&values.iter().map(|&v| int(v as i64)).collect::<Vec<_>>());

    let mut x = GaussianRationalMatrix::zeros(n, n);
    set_skew(&mut x, heads[0], heads[1], int(1));
    set_skew(&mut x, heads[1], heads[2], int(1));
    set_skew(&mut x, heads[0], heads[2], z.clone());
    Ok(WitnessData {
        kind: WitnessKind::ThreeByThree,
        working,
        j,
        x,
        loop_word: LoopWord::new(vec![0, 1, 2, 0])?,
        reductions,
    })
}

/// Positive `pᵢ ≤ nᵢ − 1` summing to `p`: one each, the rest greedily from the first block.
pub fn split_p(lparts: &[usize], p: usize) -> Option<Vec<usize>> {
    let k = lparts.len();
    if p < k || lparts.iter().any(|&n| n < 2) {
        return None;
    }
    let mut out = vec![1; k];
    let mut left = p - k;
    for (slot, &n) in out.iter_mut().zip(lparts) {
        let extra = left.min(n - 2);
        *slot += extra;
        left -= extra;
    }
    (left == 0).then_some(out)
}

pub fn k3_pq_large(spec: &TripleSpec, z: &GaussianRational) -> Result<WitnessData> {
    let ok = spec.k() == 3 && spec.min_l() >= 2 && spec.l() == 2 && spec.min_h() >= 3;
    if !ok {
        return Err(precondition("needs k = 3, all L blocks >= 2, H = U(p)xU(q) with min(p,q) >= 3", spec));
    }
    let lp = spec.lparts().to_vec();
    let p = spec.hparts()[0];
    let ps = split_p(&lp, p).ok_or_else(|| precondition("no positive split of p", spec))?;
    let n = spec.n();
    let off = offsets(&lp);
    let mut diag = Vec::with_capacity(n);
    for (b, &nb) in lp.iter().enumerate() {
        for c in 0..nb {
            diag.push(if c < ps[b] { int(1) } else { int(0) });
        }
    }
    let j = GaussianRationalMatrix::diag(&diag);

    let mut x = GaussianRationalMatrix::zeros(n, n);
    let corners = |a: usize, b: usize| {
        let top_right = (off[a], off[b] + lp[b] - 1);
        let bottom_left = (off[a] + lp[a] - 1, off[b]);
        (top_right, bottom_left)
    };
    for (a, b, low) in [(0, 1, int(1)), (1, 2, int(1)), (0, 2, z.clone())] {
        let ((r0, c0), (r1, c1)) = corners(a, b);
        set_skew(&mut x, r0, c0, int(1));
        set_skew(&mut x, r1, c1, low);
    }
    Ok(WitnessData {
        kind: WitnessKind::K3PqLarge,
        working: spec.clone(),
        j,
        x,
        loop_word: LoopWord::new(vec![0, 1, 2, 0])?,
        reductions: vec![format!("split p: ({})", parts_str(&ps))],
    })
}

pub fn k4_pq2(spec: &TripleSpec, z: &GaussianRational) -> Result<WitnessData> {
    if spec.k() < 4 || spec.l() != 2 || spec.min_h() != 2 {
        return Err(precondition("needs k >= 4 and H = U(p)xU(q) with min(p,q) = 2", spec));
    }
    let lp = merge_trailing(spec.lparts(), 4);
    let mut reductions = Vec::new();
    if spec.k() > 4 {
        reductions.push(format!("merged trailing blocks to L=({})", parts_str(&lp)));
    }
    let working = TripleSpec::new(lp.clone(), spec.hparts().to_vec())?;
    let n = working.n();
    let off = offsets(&lp);
    let mut diag = vec![int(0); n];
    diag[off[0]] = int(1);
    diag[off[1]] = int(1);
    let j = GaussianRationalMatrix::diag(&diag);

    let mut x = GaussianRationalMatrix::zeros(n, n);
    // first rows: a = b = e₁ in blocks (1,3), (2,3); c = e₁, d = z·e₁ in (1,4), (2,4)
    set_skew(&mut x, off[0], off[2], int(1));
    set_skew(&mut x, off[1], off[2], int(1));
    set_skew(&mut x, off[0], off[3], int(1));
    set_skew(&mut x, off[1], off[3], z.clone());
    Ok(WitnessData {
        kind: WitnessKind::K4Pq2,
        working,
        j,
        x,
        loop_word: LoopWord::new(vec![0, 2, 1, 3, 0])?,
        reductions,
    })
}

/// `k ≥ 4`, `min(p, q) ≥ 3`: sorts `L`, then either coarsens to three blocks
/// or, for `(1, 1, 1, n−3)`, builds the six-step loop witness.
pub fn k4_pq_large(spec: &TripleSpec, z: &GaussianRational) -> Result<WitnessData> {
    if spec.k() < 4 || spec.l() != 2 || spec.min_h() < 3 {
        return Err(precondition("needs k >= 4 and H = U(p)xU(q) with min(p,q) >= 3", spec));
    }
    let mut lp = spec.lparts().to_vec();
    lp.sort_unstable();
    let mut reductions = vec![format!("sorted L blocks to ({})", parts_str(&lp))];
    let hp = spec.hparts().to_vec();
    let k = lp.len();
    let coarse = if k >= 5 {
        Some(vec![lp[0] + lp[1], lp[2] + lp[3], lp[4..].iter().sum()])
    } else if lp[2] > 1 {
        Some(vec![lp[0] + lp[1], lp[2], lp[3]])
    } else {
        None
    };
    if let Some(c) = coarse {
        reductions.push(format!("merged to L=({})", parts_str(&c)));
        let mut w = k3_pq_large(&TripleSpec::new(c, hp)?, z)?;
        reductions.append(&mut w.reductions);
        w.reductions = reductions;
        return Ok(w);
    }

    let working = TripleSpec::new(lp, hp.clone())?;
    let n = working.n();
    let p = hp[0];
    let diag: Vec<GaussianRational> = (0..n).map(|c| if c < p { int(1) } else { int(0) }).collect();
    let j = GaussianRationalMatrix::diag(&diag);
    // Y = (v₁ … v_p) ∈ M(q, p) with rows (1, 1, 1, 0…) and (1, z, 0, 0…)
    let mut x = GaussianRationalMatrix::zeros(n, n);
    let y = [[int(1), int(1), int(1)], [int(1), z.clone(), int(0)]];
    for (r, row) in y.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            set_skew(&mut x, p + r, c, v.clone());
        }
    }
    Ok(WitnessData {
        kind: WitnessKind::K4PqLarge,
        working,
        j,
        x,
        loop_word: LoopWord::new(vec![0, 3, 1, 3, 2, 3, 0])?,
        reductions,
    })
}
