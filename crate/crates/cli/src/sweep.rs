use rayon::prelude::*;
use serde::Serialize;

use cartan_core::certificates::{certify_nonsurjective_with, default_z, WitnessKind};
use cartan_core::herringbone::{
    b_shape, classify, decompose_with, verify_with, CaseKind, TripleSpec,
};
use cartan_core::linalg::haar::haar_unitary;
use cartan_core::Tolerances;

#[derive(Serialize)]
pub struct Row {
    pub lparts: Vec<usize>,
    pub hparts: Vec<usize>,
    pub case: CaseKind,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charpoly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct Summary {
    pub n: usize,
    pub seed: u64,
    pub samples: u64,
    pub specs: usize,
    pub decomposed: usize,
    pub certified: usize,
    pub failures: usize,
    pub rows: Vec<Row>,
}

/// Ordered compositions of `n` into at least two parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            if prefix.len() >= 2 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=n {
            prefix.push(first);
            go(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

fn empty_row(spec: &TripleSpec, case: CaseKind) -> Row {
    Row {
        lparts: spec.lparts().to_vec(),
        hparts: spec.hparts().to_vec(),
        case,
        passed: false,
        word_length: None,
        max_residual: None,
        witness: None,
        charpoly: None,
        epsilon: None,
        error: None,
    }
}

fn decompose_row(spec: &TripleSpec, samples: u64, seed: u64, tol: &Tolerances) -> Row {
    let label = classify(spec);
    let mut row = empty_row(spec, label.kind);
    let expected = match b_shape(&label, spec) {
        Ok(s) => s.length,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let mut worst = 0.0f64;
    for s in 0..samples {
        let g = haar_unitary(spec.n(), seed.wrapping_add(s));
        let report = decompose_with(&g, spec, tol).and_then(|r| verify_with(&g, spec, &r, tol));
        match report {
            Ok(r) if r.passed => worst = worst.max(r.residual),
            Ok(r) => {
                row.error = Some(format!(
                    "verification failed for seed {}",
                    seed.wrapping_add(s)
                ));
                row.max_residual = Some(worst.max(r.residual));
                return row;
            }
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        }
    }
    row.word_length = Some(expected);
    row.max_residual = Some(worst);
    row.passed = true;
    row
}

fn certify_row(spec: &TripleSpec, tol: &Tolerances) -> Row {
    let mut row = empty_row(spec, CaseKind::NotSurjective);
    match certify_nonsurjective_with(spec, &default_z(), tol) {
        Ok(c) => {
            row.witness = Some(c.witness);
            row.charpoly = Some(c.charpoly_exact.to_pretty());
            row.epsilon = Some(c.epsilon);
            row.passed = c.convergence.converged;
            if !row.passed {
                row.error = Some("rescaled coefficient did not converge".into());
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn run(n: usize, samples: u64, seed: u64, tol: &Tolerances) -> Summary {
    let parts = compositions(n);
    let specs: Vec<TripleSpec> = parts
        .iter()
        .flat_map(|l| {
            parts
                .iter()
                .map(move |h| TripleSpec::new(l.clone(), h.clone()).expect("same n"))
        })
        .collect();
    let rows: Vec<Row> = specs
        .par_iter()
        .map(|s| {
            if classify(s).is_surjective() {
                decompose_row(s, samples, seed, tol)
            } else {
                certify_row(s, tol)
            }
        })
        .collect();
    let certified = rows.iter().filter(|r| r.witness.is_some()).count();
    Summary {
        n,
        seed,
        samples,
        specs: rows.len(),
        decomposed: rows
            .iter()
            .filter(|r| r.case != CaseKind::NotSurjective && r.passed)
            .count(),
        certified,
        failures: rows.iter().filter(|r| !r.passed).count(),
        rows,
    }
}
