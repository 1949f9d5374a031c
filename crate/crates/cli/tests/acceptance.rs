//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use cartan_core::blocks::{block_diagonal, offsets};
use cartan_core::certificates::{
    certify_nonsurjective, commutator_blocks, loop_product, witness_k3_pq_large, witness_k4_pq2, witness_k4_pq_large,
    witness_three_by_three, LoopWord, NonSurjectivityCertificate, WitnessKind,
};
use cartan_core::csd::{cs_decompose, BipartitionPair};
use cartan_core::herringbone::{b_shape, classify, decompose, verify, CaseKind, TripleSpec};
use cartan_core::linalg::charpoly::{char_poly_exact, char_poly_numeric};
use cartan_core::linalg::eigen::hermitian_eigen;
use cartan_core::linalg::haar::{complex_gaussian_with, haar_unitary, haar_unitary_with, rng_from_seed};
use cartan_core::linalg::{ComplexMatrix, ExactPolynomial, GaussianRational, GaussianRationalMatrix};
use cartan_core::{Error, Tolerances};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn specs_of(n: usize) -> Vec<TripleSpec> {
    let cs: Vec<_> = compositions(n).into_iter().filter(|c| c.len() >= 2).collect();
    cs.iter()
        .flat_map(|l| cs.iter().map(move |h| TripleSpec::new(l.clone(), h.clone()).unwrap()))
        .collect()
}

fn all_specs(max_n: usize) -> Vec<TripleSpec> {
    (2..=max_n).flat_map(specs_of).collect()
}

fn spec(l: &[usize], h: &[usize]) -> TripleSpec {
    TripleSpec::new(l.to_vec(), h.to_vec()).unwrap()
}

fn soundness() -> Verdict {
    let specs: Vec<_> = all_specs(9).into_iter().filter(|s| classify(s).is_surjective()).collect();
    let failures: Vec<String> = specs
        .par_iter()
        .flat_map_iter(|s| {
            let n = s.n();
            let expected = b_shape(&classify(s), s).unwrap().length;
            (0..25u64).filter_map(move |seed| {
                let g = haar_unitary(n, seed);
                let r = match decompose(&g, s) {
                    Ok(r) => r,
                    Err(e) => return Some(format!("{s} seed {seed}: {e}")),
                };
                let v = verify(&g, s, &r).unwrap();
                let ok = v.passed
                    && v.residual <= 1e-8 * n as f64
                    && v.left_off_block <= 1e-9
                    && v.right_off_block <= 1e-9
                    && r.word.len() == expected;
                (!ok).then(|| format!("{s} seed {seed}: {v:?}"))
            })
        })
        .collect();
    verdict(
        failures.is_empty(),
        format!("{} specs x 25 seeds, {} failures{}", specs.len(), failures.len(), first(&failures)),
    )
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

/// Closed-form word length for each case, read off the raw partitions.
fn table_length(kind: CaseKind, s: &TripleSpec) -> usize {
    let (lp, hp) = (s.lparts(), s.hparts());
    let without_one = |parts: &[usize]| {
        let mut v = parts.to_vec();
        let at = v.iter().position(|&x| x == 1).unwrap();
        v.remove(at);
        (v[0], v[1])
    };
    match kind {
        CaseKind::Case0 => lp[0].min(lp[1]).min(hp[0]).min(hp[1]),
        CaseKind::CaseI => {
            let (n2, n3) = without_one(lp);
            (2 * hp[0]).min(2 * hp[1]).min(2 * n2 + 1).min(2 * n3 + 1)
        }
        CaseKind::CaseIPrime => {
            let (m2, m3) = without_one(hp);
            (2 * lp[0]).min(2 * lp[1]).min(2 * m2 + 1).min(2 * m3 + 1)
        }
        CaseKind::CaseII | CaseKind::CaseIIPrime => 5,
        CaseKind::CaseIII => lp.len() - 1,
        CaseKind::CaseIIIPrime => hp.len() - 1,
        CaseKind::NotSurjective => unreachable!(),
    }
}

fn shape_table() -> Verdict {
    let mut per_case = std::collections::BTreeMap::<String, (usize, usize)>::new();
    let mut bad = Vec::new();
    for s in all_specs(8) {
        let label = classify(&s);
        if !label.is_surjective() {
            continue;
        }
        let entry = per_case.entry(label.kind.label().to_string()).or_default();
        if entry.0 >= 25 {
            continue;
        }
        let g = haar_unitary(s.n(), 7 + entry.0 as u64);
        let got = decompose(&g, &s).unwrap().word.len();
        let want = table_length(label.kind, &s);
        entry.0 += 1;
        if got == want {
            entry.1 += 1;
        } else {
            bad.push(format!("{s}: {got} vs {want}"));
        }
    }
    let enough = per_case.len() == 7 && per_case.values().all(|&(n, _)| n >= 10);
    let counts: Vec<String> = per_case.iter().map(|(k, (n, ok))| format!("{k}:{ok}/{n}")).collect();
    verdict(enough && bad.is_empty(), format!("{}{}", counts.join(" "), first(&bad)))
}

fn corner_singular_values(g: &ComplexMatrix, r: usize, c: usize) -> Vec<f64> {
    let y = g.submatrix(0, 0, r, c);
    let gram = if r <= c { y.matmul(&y.adjoint()) } else { y.adjoint().matmul(&y) };
    let mut s: Vec<f64> = hermitian_eigen(&gram, 100)
        .unwrap()
        .values
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn csd_svd() -> Verdict {
    let mut rng = rng_from_seed(31);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(2..=10);
        let r = rng.random_range(1..n);
        let c = rng.random_range(1..n);
        let bp = BipartitionPair::new((r, n - r), (c, n - c)).unwrap();
        let g = haar_unitary_with(n, &mut rng);
        let res = cs_decompose(&g, &bp).unwrap();
        let mut cosines: Vec<f64> = res.angles.iter().map(|t| t.cos()).collect();
        cosines.extend(std::iter::repeat_n(1.0, r.min(c) - bp.rank()));
        cosines.sort_by(|a, b| b.total_cmp(a));
        let sv = corner_singular_values(&g, r, c);
        if cosines.len() != sv.len() {
            return verdict(false, format!("n={n} r={r} c={c}: {} cosines vs {} values", cosines.len(), sv.len()));
        }
        for (a, b) in cosines.iter().zip(&sv) {
            worst = worst.max((a - b).abs());
        }
    }
    verdict(worst <= 1e-9, format!("200 samples, max deviation {worst:.2e}"))
}

fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

/// `λ^d + Σ c·λ^power`.
fn monic(degree: usize, terms: &[(usize, GaussianRational)]) -> ExactPolynomial {
    let mut c = vec![gi(0, 0); degree + 1];
    c[0] = gi(1, 0);
    for (power, v) in terms {
        c[degree - power] = v.clone();
    }
    ExactPolynomial { coefficients: c }
}

/// `(v, w) = Σ v_k · conj(w_k)`.
fn inner(v: &[GaussianRational], w: &[GaussianRational]) -> GaussianRational {
    v.iter().zip(w).fold(gi(0, 0), |acc, (a, b)| acc + a.clone() * b.conj())
}

fn row(x: &GaussianRationalMatrix, r: usize, c0: usize, len: usize) -> Vec<GaussianRational> {
    (0..len).map(|c| x.get(r, c0 + c).clone()).collect()
}

fn column(x: &GaussianRationalMatrix, r0: usize, len: usize, c: usize) -> Vec<GaussianRational> {
    (0..len).map(|r| x.get(r0 + r, c).clone()).collect()
}

/// Exact polynomial recomputed from the certificate's J, X and loop.
fn recomputed(c: &NonSurjectivityCertificate) -> ExactPolynomial {
    let parts = c.working_spec.lparts();
    let q = commutator_blocks(&c.x, &c.projection.j, parts).unwrap();
    char_poly_exact(&loop_product(&q, parts, &c.loop_word).unwrap()).unwrap()
}

fn witness_polynomials() -> Verdict {
    let z = GaussianRational::i();
    let zbar = z.conj();
    let tol = Tolerances::default();
    let mut checked = Vec::new();
    let mut bad = Vec::new();
    let mut formula_bad = Vec::new();
    let mut check = |name: &str, c: NonSurjectivityCertificate, want: ExactPolynomial| {
        let ok = c.charpoly_exact == want && recomputed(&c) == want;
        if !ok {
            bad.push(format!("{name} {}: {} vs {}", c.spec, c.charpoly_exact.to_pretty(), want.to_pretty()));
        }
        checked.push(name.to_string());
    };

    // λ^{n₁} − 2z̄ λ^{n₁−1}
    for (l, h) in [(&[1, 1, 1][..], &[1, 1, 1][..]), (&[2, 2, 2], &[2, 2, 2]), (&[3, 1, 2], &[2, 2, 2])] {
        let s = spec(l, h);
        let n1 = l[0];
        let c = witness_three_by_three(&s, &z, &tol).unwrap();
        check("first", c, monic(n1, &[(n1 - 1, -(zbar.clone() + zbar.clone()))]));
    }
    // λ^{n₁} + z̄ λ^{n₁−2}
    for (l, h) in [(&[2, 2, 2][..], &[3, 3][..]), (&[3, 2, 2], &[3, 4]), (&[4, 2, 3], &[3, 6])] {
        let s = spec(l, h);
        let n1 = l[0];
        let c = witness_k3_pq_large(&s, &z, &tol).unwrap();
        check("second", c, monic(n1, &[(n1 - 2, zbar.clone())]));
    }
    // λ^{n₁−1}(λ − (a,b)(d,c)), vectors read back from X
    for (l, h) in [(&[1, 1, 1, 1][..], &[2, 2][..]), (&[2, 1, 1, 2], &[2, 4]), (&[3, 2, 1, 1], &[5, 2])] {
        let s = spec(l, h);
        let c = witness_k4_pq2(&s, &z, &tol).unwrap();
        let p = c.working_spec.lparts().to_vec();
        let off = offsets(&p);
        let a = row(&c.x, off[0], off[2], p[2]);
        let b = row(&c.x, off[1], off[2], p[2]);
        let cc = row(&c.x, off[0], off[3], p[3]);
        let d = row(&c.x, off[1], off[3], p[3]);
        let value = inner(&a, &b) * inner(&d, &cc);
        let n1 = p[0];
        check("third", c, monic(n1, &[(n1 - 1, -value)]));
    }
    // λ − (v₂,v₁)(v₃,v₂)(v₁,v₃), columns of Y read back from X
    for (l, h) in [(&[1, 1, 1, 3][..], &[3, 3][..]), (&[1, 1, 1, 4], &[4, 3]), (&[1, 1, 1, 5], &[3, 5])] {
        let s = spec(l, h);
        let c = witness_k4_pq_large(&s, &z, &tol).unwrap();
        let p = c.working_spec.hparts()[0];
        let q = c.working_spec.n() - p;
        let v: Vec<_> = (0..3).map(|k| column(&c.x, p, q, k)).collect();
        let value = inner(&v[1], &v[0]) * inner(&v[2], &v[1]) * inner(&v[0], &v[2]);
        let literal = monic(1, &[(0, gi(-1, -1))]);
        if monic(1, &[(0, -value.clone())]) != literal {
            formula_bad.push(format!("fourth {s}: inner products give {value}"));
        }
        check("fourth", c, literal);
    }
    bad.extend(formula_bad);
    let count = |k: &str| checked.iter().filter(|c| *c == k).count();
    let enough = ["first", "second", "third", "fourth"].iter().all(|k| count(k) >= 2);
    verdict(
        enough && bad.is_empty(),
        format!("{} witnesses at z = i, exact equality{}", checked.len(), first(&bad)),
    )
}

fn random_loop(k: usize, rng: &mut impl Rng) -> LoopWord {
    loop {
        let steps = rng.random_range(2..=6);
        let start = rng.random_range(0..k);
        let mut v = vec![start];
        for _ in 1..steps {
            let prev = *v.last().unwrap();
            let mut next = rng.random_range(0..k - 1);
            if next >= prev {
                next += 1;
            }
            v.push(next);
        }
        if *v.last().unwrap() != start {
            v.push(start);
            return LoopWord::new(v).unwrap();
        }
    }
}

fn loop_invariance() -> Verdict {
    let mut rng = rng_from_seed(1000);
    let mut worst = 0.0f64;
    for t in 0..1000 {
        let n = rng.random_range(2..=10);
        let cs: Vec<_> = compositions(n).into_iter().filter(|c| c.len() >= 2).collect();
        let parts = cs[rng.random_range(0..cs.len())].clone();
        let p = if t % 2 == 0 {
            haar_unitary_with(n, &mut rng).into_matrix()
        } else {
            complex_gaussian_with(n, n, &mut rng).scale(&Complex64::new(1.0 / (n as f64).sqrt(), 0.0))
        };
        let blocks: Vec<ComplexMatrix> = parts.iter().map(|&m| haar_unitary_with(m, &mut rng).into_matrix()).collect();
        let l = block_diagonal(&blocks.iter().collect::<Vec<_>>());
        let moved = l.matmul(&p).matmul(&l.adjoint());
        let lp = random_loop(parts.len(), &mut rng);
        let a = char_poly_numeric(&loop_product(&p, &parts, &lp).unwrap()).unwrap();
        let b = char_poly_numeric(&loop_product(&moved, &parts, &lp).unwrap()).unwrap();
        worst = worst.max(a.max_abs_diff(&b));
    }
    verdict(worst <= 1e-9, format!("1000 triples, max coefficient deviation {worst:.2e}"))
}

enum Outcome {
    Decomposed,
    Certified(Box<NonSurjectivityCertificate>),
    Wrong(String),
}

fn dichotomy_run() -> Vec<(TripleSpec, Outcome)> {
    all_specs(9)
        .into_par_iter()
        .map(|s| {
            let surjective = classify(&s).is_surjective();
            let g = haar_unitary(s.n(), 0);
            let d = decompose(&g, &s);
            let c = certify_nonsurjective(&s);
            let out = match (surjective, d, c) {
                (true, Ok(r), Err(Error::SpecActuallySurjective)) if verify(&g, &s, &r).unwrap().passed => {
                    Outcome::Decomposed
                }
                (false, Err(Error::NotSurjectiveSpec), Ok(c)) => Outcome::Certified(Box::new(c)),
                (sur, d, c) => Outcome::Wrong(format!(
                    "surjective={sur} decompose={:?} certify={:?}",
                    d.map(|_| ()),
                    c.map(|_| ())
                )),
            };
            (s, out)
        })
        .collect()
}

fn epsilon(results: &[(TripleSpec, Outcome)]) -> Verdict {
    let mut count = 0;
    let mut bad = Vec::new();
    for (s, o) in results {
        if let Outcome::Certified(c) = o {
            count += 1;
            let ok = c.epsilon > 0.0
                && c.epsilon <= 0.5
                && c.rescaled_flagged.im.abs() >= 1e-6
                && !c.charpoly_exact.coefficients[c.flagged_index].is_real()
                && c.convergence.converged;
            if !ok {
                bad.push(format!("{s}: eps {} errors {:?}", c.epsilon, c.convergence.errors));
            }
        }
    }
    verdict(
        count > 0 && bad.is_empty(),
        format!("{count} certificates, {} failures{}", bad.len(), first(&bad)),
    )
}

fn dichotomy(results: &[(TripleSpec, Outcome)]) -> Verdict {
    let mut decomposed = 0;
    let mut kinds = std::collections::BTreeMap::<String, usize>::new();
    let mut bad = Vec::new();
    for (s, o) in results {
        match o {
            Outcome::Decomposed => decomposed += 1,
            Outcome::Certified(c) => {
                let k = match c.witness {
                    WitnessKind::ThreeByThree => "three_by_three",
                    WitnessKind::K3PqLarge => "k3_pq_large",
                    WitnessKind::K4Pq2 => "k4_pq2",
                    WitnessKind::K4PqLarge => "k4_pq_large",
                };
                *kinds.entry(k.into()).or_default() += 1;
            }
            Outcome::Wrong(e) => bad.push(format!("{s}: {e}")),
        }
    }
    let kinds: Vec<String> = kinds.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    verdict(
        bad.is_empty(),
        format!(
            "{} specs, {decomposed} decomposed, certified {}, {} gaps or mismatches{}",
            results.len(),
            kinds.join(" "),
            bad.len(),
            first(&bad)
        ),
    )
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 6] = [
        &["decompose", "--n", "6", "--lparts", "1,2,3", "--hparts", "3,3", "--haar", "--seed", "42"],
        &["decompose", "--n", "7", "--lparts", "2,2,3", "--hparts", "2,5", "--haar", "--seed", "9"],
        &["sample", "--n", "5", "--seed", "3", "--samples", "4"],
        &["certify", "--n", "6", "--lparts", "1,1,1,3", "--hparts", "3,3"],
        &["classify", "--lparts", "4,1", "--hparts", "1,1,1,2"],
        &["sweep", "--n", "5", "--samples", "2", "--seed", "11"],
    ];
    for args in runs {
        let a = match cli(args) {
            Ok(a) => a,
            Err(e) => return verdict(false, e),
        };
        for _ in 0..2 {
            match cli(args) {
                Ok(b) if b == a => {}
                Ok(_) => return verdict(false, format!("{args:?} differs between runs")),
                Err(e) => return verdict(false, e),
            }
        }
    }
    verdict(true, format!("{} commands x 3 runs byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |i: usize, name: &str, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = f();
        all_ok &= v.ok;
        println!(
            "[{}] criterion {i}: {name}: {} ({:.1}s)",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
    };
    report(1, "decomposition soundness sweep", &mut soundness);
    report(2, "word length table", &mut shape_table);
    report(3, "CSD/SVD correspondence", &mut csd_svd);
    report(4, "exact witness polynomials", &mut witness_polynomials);
    report(5, "loop invariance under Ad(L)", &mut loop_invariance);
    let t = Instant::now();
    let results = dichotomy_run();
    println!("decompose + certify over every triple with n <= 9: {:.1}s", t.elapsed().as_secs_f64());
    report(6, "epsilon perturbation", &mut || epsilon(&results));
    report(7, "dichotomy completeness", &mut || dichotomy(&results));
    report(8, "CLI determinism", &mut determinism);
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
