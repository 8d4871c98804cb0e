//! Nonnegative factorization of rank-3 matrices with inner dimension at
//! most `ceil(6 * min(m, n) / 7)`.
//!
//! The short side is cut into blocks of seven lines in index order; each
//! block is factored with inner dimension at most 6 and the leftover lines
//! are passed through an identity block. Lefts assemble block-diagonally
//! and rights stack vertically.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{format_scalar, mat_rank, Matrix};
use crate::report::VerificationReport;
use crate::section::{factor_7xn, factor_low_rank};

/// How one block of a factorization was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Identity left factor; the block's lines are copied into the right.
    Identity,
    /// Rank at most 2, inner dimension equal to the rank.
    LowRank { rank: usize },
    /// Simplex section with at most six vertices, used directly.
    Section { vertices: usize },
    /// Seven-vertex section refactored through the canonical family.
    Heptagon { steps: usize, reversed: bool },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Identity => "identity",
            Method::LowRank { .. } => "low-rank",
            Method::Section { .. } => "section",
            Method::Heptagon { .. } => "heptagon",
        }
    }
}

/// A nonnegative product `left * right` for one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub left: Matrix,
    pub right: Matrix,
    pub method: Method,
}

impl Factorization {
    pub fn inner_dim(&self) -> usize {
        self.left.cols()
    }

    fn identity(block: Matrix) -> Self {
        Factorization {
            left: Matrix::identity(block.rows()),
            right: block,
            method: Method::Identity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Rows => "rows",
            Axis::Cols => "cols",
        }
    }
}

/// Where one block came from: which input lines it covers and how it was
/// factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub axis: Axis,
    pub indices: Vec<usize>,
    pub inner_dim: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NNFactorization {
    pub left: Matrix,
    pub right: Matrix,
    pub inner_dim: usize,
    pub bound: usize,
    pub trace: Vec<TraceEntry>,
}

/// `ceil(6 * min(m, n) / 7)`.
pub fn inner_dim_bound(m: usize, n: usize) -> usize {
    (6 * m.min(n)).div_ceil(7)
}

pub fn nn_factor(a: &Matrix) -> Result<NNFactorization> {
    a.require_nonnegative()?;
    let rank = mat_rank(a);
    if rank > 3 {
        return Err(Error::Rank {
            expected: "at most 3".into(),
            found: rank,
        });
    }
    let (m, n) = a.shape();
    let rows: Vec<usize> = (0..m).filter(|&i| !a.is_zero_row(i)).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| !a.is_zero_col(j)).collect();
    let reduced = a.select_rows(&rows).select_cols(&cols);
    let transposed = reduced.rows() > reduced.cols();
    let (work, axis, lines) = if transposed {
        (reduced.transpose(), Axis::Cols, &cols)
    } else {
        (reduced, Axis::Rows, &rows)
    };

    let blocks: Vec<(Vec<usize>, Factorization)> = if work.rows() == 0 {
        Vec::new()
    } else if rank <= 2 {
        vec![((0..work.rows()).collect(), factor_low_rank(&work)?)]
    } else if work.rows() <= 6 {
        vec![(
            (0..work.rows()).collect(),
            Factorization::identity(work.clone()),
        )]
    } else {
        let chunks: Vec<Vec<usize>> = (0..work.rows())
            .collect::<Vec<_>>()
            .chunks(7)
            .map(<[usize]>::to_vec)
            .collect();
        chunks
            .into_par_iter()
            .map(|idx| {
                let block = work.select_rows(&idx);
                let fact = if idx.len() < 7 {
                    Factorization::identity(block)
                } else if mat_rank(&block) == 3 {
                    factor_7xn(&block)?
                } else {
                    factor_low_rank(&block)?
                };
                Ok((idx, fact))
            })
            .collect::<Result<_>>()?
    };

    let lefts: Vec<Matrix> = blocks.iter().map(|(_, f)| f.left.clone()).collect();
    let rights: Vec<Matrix> = blocks.iter().map(|(_, f)| f.right.clone()).collect();
    let inner: usize = blocks.iter().map(|(_, f)| f.inner_dim()).sum();
    let mut left = Matrix::block_diag(&lefts);
    let mut right = if rights.is_empty() {
        Matrix::zeros(0, work.cols())
    } else {
        Matrix::vstack(&rights)?
    };
    if transposed {
        (left, right) = (right.transpose(), left.transpose());
    }
    let trace = blocks
        .iter()
        .map(|(idx, f)| TraceEntry {
            axis,
            indices: idx.iter().map(|&i| lines[i]).collect(),
            inner_dim: f.inner_dim(),
            method: f.method,
        })
        .collect();
    let fact = NNFactorization {
        left: left.spread_rows(&rows, m),
        right: right.spread_cols(&cols, n),
        inner_dim: inner,
        bound: inner_dim_bound(m, n),
        trace,
    };
    let report = verify_nn_factorization(a, &fact);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "assembled certificate fails:\n{report}"
        )));
    }
    log::info!(
        "factored {m}x{n} matrix with inner dimension {inner} (bound {})",
        fact.bound
    );
    Ok(fact)
}

/// Exact checks of a certificate against the matrix it claims to factor.
pub fn verify_nn_factorization(a: &Matrix, fact: &NNFactorization) -> VerificationReport {
    let mut report = VerificationReport::default();
    let (m, n) = a.shape();
    let dims_ok = fact.left.rows() == m
        && fact.right.cols() == n
        && fact.left.cols() == fact.inner_dim
        && fact.right.rows() == fact.inner_dim;
    report.record(
        "dimensions",
        (!dims_ok).then(|| {
            format!(
                "input is {m}x{n}, left is {}x{}, right is {}x{}, inner dimension {}",
                fact.left.rows(),
                fact.left.cols(),
                fact.right.rows(),
                fact.right.cols(),
                fact.inner_dim
            )
        }),
    );
    for (name, factor) in [
        ("left nonnegative", &fact.left),
        ("right nonnegative", &fact.right),
    ] {
        report.record(
            name,
            factor
                .first_negative()
                .map(|(i, j)| format!("entry ({i}, {j}) = {}", format_scalar(&factor[(i, j)]))),
        );
    }
    let product = if fact.left.cols() == fact.right.rows() {
        Some(&fact.left * &fact.right)
    } else {
        None
    };
    let mismatch = match &product {
        None => Some("factors cannot be multiplied".to_string()),
        Some(p) if p.shape() != a.shape() => Some(format!(
            "product is {}x{}, input is {m}x{n}",
            p.rows(),
            p.cols()
        )),
        Some(p) => (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| p[(i, j)] != a[(i, j)])
            .map(|(i, j)| {
                format!(
                    "entry ({i}, {j}): product {} but input {}",
                    format_scalar(&p[(i, j)]),
                    format_scalar(&a[(i, j)])
                )
            }),
    };
    report.record("reconstruction", mismatch);
    let bound = inner_dim_bound(m, n);
    let bound_failure = if fact.inner_dim > bound {
        Some(format!(
            "inner dimension {} exceeds {bound}",
            fact.inner_dim
        ))
    } else if fact.bound != bound {
        Some(format!(
            "recorded bound {} but ceil(6*{}/7) = {bound}",
            fact.bound,
            m.min(n)
        ))
    } else {
        None
    };
    report.record("bound", bound_failure);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn bound_values() {
        let got: Vec<usize> = [0, 1, 6, 7, 8, 10, 14, 50]
            .iter()
            .map(|&m| inner_dim_bound(m, 100))
            .collect();
        assert_eq!(got, vec![0, 1, 6, 6, 7, 9, 12, 43]);
        for m in 0..200 {
            let (q, r) = (m / 7, m % 7);
            assert_eq!(inner_dim_bound(m, m), 6 * q + r);
        }
    }

    #[test]
    fn zero_matrix() {
        let a = Matrix::zeros(3, 5);
        let f = nn_factor(&a).unwrap();
        assert_eq!(f.inner_dim, 0);
        assert!(f.trace.is_empty());
        assert!(verify_nn_factorization(&a, &f).passed());
    }

    #[test]
    fn small_side_uses_identity() {
        let a = Matrix::from_ints(&[
            [1, 0, 2, 1, 0, 3, 1],
            [0, 1, 1, 0, 2, 1, 1],
            [1, 1, 0, 2, 1, 1, 0],
            [1, 1, 3, 1, 2, 4, 2],
            [1, 2, 1, 2, 3, 2, 1],
            [2, 1, 2, 3, 1, 4, 1],
        ]);
        assert_eq!(mat_rank(&a), 3);
        let f = nn_factor(&a).unwrap();
        assert_eq!(f.inner_dim, 6);
        assert_eq!(f.trace[0].method, Method::Identity);
        let t = nn_factor(&a.transpose()).unwrap();
        assert_eq!(t.trace[0].axis, Axis::Cols);
        assert!(verify_nn_factorization(&a.transpose(), &t).passed());
    }

    #[test]
    fn rejects_high_rank() {
        assert!(matches!(
            nn_factor(&Matrix::identity(4)),
            Err(Error::Rank { found: 4, .. })
        ));
    }

    #[test]
    fn tampered_certificates_are_caught() {
        let a = Matrix::from_ints(&[[1, 2, 0], [2, 4, 0]]);
        let f = nn_factor(&a).unwrap();
        assert!(verify_nn_factorization(&a, &f).passed());

        let mut neg = f.clone();
        neg.right[(0, 0)] = -neg.right[(0, 0)].clone();
        let r = verify_nn_factorization(&a, &neg);
        assert!(r.failed("right nonnegative") && r.failed("reconstruction"));

        let swapped = NNFactorization {
            left: f.right.clone(),
            right: f.left.clone(),
            ..f.clone()
        };
        assert!(verify_nn_factorization(&a, &swapped).failed("dimensions"));

        let mut loose = f.clone();
        loose.bound = 5;
        assert!(verify_nn_factorization(&a, &loose).failed("bound"));
        let mut wrong = f;
        wrong.left[(1, 0)] = int(7);
        assert!(verify_nn_factorization(&a, &wrong).failed("reconstruction"));
    }
}
