//! Block partitions of `{0, …, n−1}` into consecutive index ranges.

use std::ops::Range;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Start offset of every block, plus `n` at the end.
pub fn offsets(parts: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(parts.len() + 1);
    let mut acc = 0;
    out.push(0);
    for p in parts {
        acc += p;
        out.push(acc);
    }
    out
}

pub fn block_ranges(parts: &[usize]) -> Vec<Range<usize>> {
    let off = offsets(parts);
    off.windows(2).map(|w| w[0]..w[1]).collect()
}

/// Block index of every coordinate.
pub fn block_labels(parts: &[usize]) -> Vec<usize> {
    parts
        .iter()
        .enumerate()
        .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
        .collect()
}

/// Frobenius mass of the entries outside the diagonal blocks.
pub fn off_block_mass(m: &ComplexMatrix, parts: &[usize]) -> f64 {
    let labels = block_labels(parts);
    assert_eq!(labels.len(), m.rows());
    assert_eq!(labels.len(), m.cols());
    let mut acc = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if labels[i] != labels[j] {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zeroes every entry outside the diagonal blocks.
pub fn project_block_diagonal(m: &ComplexMatrix, parts: &[usize]) -> ComplexMatrix {
    let labels = block_labels(parts);
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if labels[i] == labels[j] {
            *m.get(i, j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Assembles `diag(b_0, b_1, …)`.
pub fn block_diagonal(blocks: &[&ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.set_submatrix(at, at, b);
        at += b.rows();
    }
    out
}

/// Coarser partition obtained by merging all blocks from index `keep − 1` on.
pub fn merge_trailing(parts: &[usize], keep: usize) -> Vec<usize> {
    assert!(keep >= 1 && keep <= parts.len());
    let mut out = parts[..keep - 1].to_vec();
    out.push(parts[keep - 1..].iter().sum());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_labels() {
        assert_eq!(offsets(&[1, 2, 3]), vec![0, 1, 3, 6]);
        assert_eq!(block_ranges(&[2, 1]), vec![0..2, 2..3]);
        assert_eq!(block_labels(&[2, 1]), vec![0, 0, 1]);
        assert_eq!(merge_trailing(&[1, 1, 2, 3], 3), vec![1, 1, 5]);
    }

    #[test]
    fn projection_removes_off_block_mass() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new((i * 3 + j) as f64, 0.0));
        assert!(off_block_mass(&m, &[1, 2]) > 0.0);
        let p = project_block_diagonal(&m, &[1, 2]);
        assert_eq!(off_block_mass(&p, &[1, 2]), 0.0);
        assert_eq!(*p.get(1, 2), *m.get(1, 2));
    }
}
