//! Rank-6 factorization of any 7x7 rank-3 matrix carrying the heptagon
//! zero pattern, by relabeling and rescaling it into the canonical family.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_scalar, mat_rank, Matrix, Scalar};
use crate::monomial::MonomialMatrix;
use crate::psi::{
    build_v, cyc, factor_admissible_v, is_structural_zero, PsiVector, Rank6Certificate,
};

/// Row and column relabeling that puts a matrix into the canonical
/// pattern: entry `(i, j)` of the relabeled matrix is
/// `m[(rows[i], cols[j])]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicLabeling {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl CyclicLabeling {
    pub fn apply(&self, m: &Matrix) -> Matrix {
        m.select_rows(&self.rows).select_cols(&self.cols)
    }
}

/// Positive diagonal rescalings with `rows * m * cols = V(psi) * diag(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiReduction {
    pub psi: PsiVector,
    pub row_scale: MonomialMatrix,
    pub col_scale: MonomialMatrix,
    pub c: Vec<Scalar>,
}

impl PsiReduction {
    pub fn scaled(&self, m: &Matrix) -> Matrix {
        self.row_scale.apply_left(&self.col_scale.apply_right(m))
    }

    pub fn target(&self) -> Matrix {
        build_v(&self.psi).scale_cols(&self.c)
    }
}

/// Checks that `m` is zero exactly on the canonical pattern and positive
/// elsewhere.
fn check_canonical(m: &Matrix) -> Result<()> {
    for r in 0..7 {
        for c in 0..7 {
            let (i, j) = (r as i64 + 1, c as i64 + 1);
            let x = &m[(r, c)];
            let ok = if is_structural_zero(i, j) {
                x.is_zero()
            } else {
                x.is_positive()
            };
            if !ok {
                return Err(Error::Pattern(format!(
                    "entry ({i}, {j}) = {} breaks the canonical pattern",
                    format_scalar(x)
                )));
            }
        }
    }
    Ok(())
}

fn require_7x7(m: &Matrix) -> Result<()> {
    if m.shape() != (7, 7) {
        return Err(Error::Dimension(format!(
            "expected a 7x7 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Finds the relabeling of a matrix whose zeros form a heptagon's
/// vertex-facet incidence. Columns are nodes and each row is an edge
/// between its two zero columns; the traversal starts at column 0 and
/// heads toward its lower-indexed neighbor.
pub fn detect_cyclic_labeling(m: &Matrix) -> Result<CyclicLabeling> {
    require_7x7(m)?;
    if let Some((r, c)) = m.first_negative() {
        return Err(Error::Pattern(format!(
            "entry ({}, {}) is negative",
            r + 1,
            c + 1
        )));
    }
    let mut edges = Vec::with_capacity(7);
    for r in 0..7 {
        let zeros: Vec<usize> = (0..7).filter(|&c| m[(r, c)].is_zero()).collect();
        match zeros[..] {
            [a, b] => edges.push((a, b)),
            _ => {
                return Err(Error::Pattern(format!(
                    "row {} has {} zeros, expected 2",
                    r + 1,
                    zeros.len()
                )))
            }
        }
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 7];
    for (r, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(r);
        incident[b].push(r);
    }
    if let Some(c) = incident.iter().position(|rows| rows.len() != 2) {
        return Err(Error::Pattern(format!(
            "column {} has {} zeros, expected 2",
            c + 1,
            incident[c].len()
        )));
    }
    let other = |row: usize, node: usize| {
        let (a, b) = edges[row];
        if a == node {
            b
        } else {
            a
        }
    };

    let start = 0;
    let (e0, e1) = (incident[start][0], incident[start][1]);
    let first_row = if other(e0, start) <= other(e1, start) {
        e0
    } else {
        e1
    };
    let mut cols = vec![start];
    let mut rows = Vec::with_capacity(7);
    let (mut node, mut row) = (start, first_row);
    for _ in 0..7 {
        rows.push(row);
        node = other(row, node);
        if node == start {
            break;
        }
        cols.push(node);
        row = if incident[node][0] == row {
            incident[node][1]
        } else {
            incident[node][0]
        };
    }
    if cols.len() != 7 || rows.len() != 7 || node != start {
        return Err(Error::Pattern(
            "zero pattern does not form a single 7-cycle".into(),
        ));
    }
    let labeling = CyclicLabeling { rows, cols };
    check_canonical(&labeling.apply(m))?;
    Ok(labeling)
}

/// Rescales a canonical-pattern rank-3 matrix into `V(psi) * diag(c)`.
pub fn reduce_to_psi(m: &Matrix) -> Result<PsiReduction> {
    require_7x7(m)?;
    check_canonical(m)?;
    let rank = mat_rank(m);
    if rank != 3 {
        return Err(Error::Rank {
            expected: "3".into(),
            found: rank,
        });
    }
    let u = |i: i64, j: i64| &m[(cyc(i), cyc(j))];
    let one = Scalar::one();
    let mut col = vec![one.clone(); 7];
    col[cyc(3)] = u(5, 4) / u(5, 3);
    col[cyc(5)] = u(2, 4) / u(2, 5);
    let mut row = vec![one; 7];
    row[cyc(3)] = u(2, 5) / (u(2, 4) * u(3, 5));
    row[cyc(4)] = u(5, 3) / (u(4, 3) * u(5, 4));
    for i in [1, 2, 5, 6, 7] {
        row[cyc(i)] = u(i, 4).recip();
    }
    let row_scale = MonomialMatrix::diagonal(row)?;
    let col_scale = MonomialMatrix::diagonal(col)?;
    let scaled = row_scale.apply_left(&col_scale.apply_right(m));
    let s = |i: i64, j: i64| scaled[(cyc(i), cyc(j))].clone();
    let psi = PsiVector::new(s(6, 3), s(7, 3), s(1, 3), s(6, 5), s(7, 5), s(1, 5));
    let v = build_v(&psi);

    let mut c = Vec::with_capacity(7);
    for j in 0..7 {
        let Some(i) = (0..7).find(|&i| !v[(i, j)].is_zero()) else {
            return Err(Error::Consistency(format!(
                "column {} of V vanishes",
                j + 1
            )));
        };
        let cj = &scaled[(i, j)] / &v[(i, j)];
        if !cj.is_positive() {
            return Err(Error::Consistency(format!(
                "column constant c_{} = {} is not positive",
                j + 1,
                format_scalar(&cj)
            )));
        }
        if let Some(bad) = (0..7).find(|&r| scaled[(r, j)] != &cj * &v[(r, j)]) {
            return Err(Error::Consistency(format!(
                "column {} ratio at row {} disagrees with row {}",
                j + 1,
                bad + 1,
                i + 1
            )));
        }
        c.push(cj);
    }
    Ok(PsiReduction {
        psi,
        row_scale,
        col_scale,
        c,
    })
}

/// Factors a nonnegative rank-3 7x7 matrix with the heptagon zero pattern
/// (up to relabeling) as `F * G`, `F` 7x6 and `G` 6x7, both nonnegative.
pub fn factor_cyclic7(m: &Matrix) -> Result<Rank6Certificate> {
    require_7x7(m)?;
    m.require_nonnegative()?;
    let rank = mat_rank(m);
    if rank != 3 {
        return Err(Error::Rank {
            expected: "3".into(),
            found: rank,
        });
    }
    let labeling = detect_cyclic_labeling(m)?;
    let canonical = labeling.apply(m);
    let reduction = reduce_to_psi(&canonical)?;
    let cert = factor_admissible_v(&reduction.psi)?;

    // canonical = rows^-1 * F * G * diag(c) * cols^-1
    let f = reduction.row_scale.inverse().apply_left(&cert.f);
    let gscale: Vec<Scalar> = reduction
        .c
        .iter()
        .zip(reduction.col_scale.scales())
        .map(|(c, s)| c / s)
        .collect();
    let g = cert.g.scale_cols(&gscale);

    let result = Rank6Certificate {
        f: f.spread_rows(&labeling.rows, 7),
        g: g.spread_cols(&labeling.cols, 7),
        ..cert
    };
    if !result.certifies(m) {
        return Err(Error::TheoryViolation(
            "transported heptagon factors do not reproduce the input".into(),
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::fixtures::h7_psi;

    fn canonical_sample() -> Matrix {
        build_v(&h7_psi())
    }

    #[test]
    fn canonical_input_gets_identity_labeling() {
        let l = detect_cyclic_labeling(&canonical_sample()).unwrap();
        assert_eq!(l.rows, (0..7).collect::<Vec<_>>());
        assert_eq!(l.cols, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn shifted_rows_recover_inverse_shift() {
        let v = canonical_sample();
        let shifted: Vec<usize> = (0..7).map(|i| (i + 3) % 7).collect();
        let m = v.select_rows(&shifted);
        let l = detect_cyclic_labeling(&m).unwrap();
        assert_eq!(l.rows, (0..7).map(|i| (i + 4) % 7).collect::<Vec<_>>());
        assert_eq!(l.apply(&m), v);
    }

    #[test]
    fn bad_patterns_are_rejected() {
        let mut m = canonical_sample();
        m[(0, 4)] = int(0);
        assert!(matches!(detect_cyclic_labeling(&m), Err(Error::Pattern(_))));
        let mut m = canonical_sample();
        m[(0, 4)] = int(-1);
        assert!(matches!(detect_cyclic_labeling(&m), Err(Error::Pattern(_))));
        // two disjoint cycles: a 3-cycle on columns 0..3 and a 4-cycle on 3..7
        let mut m = Matrix::from_fn(7, 7, |_, _| int(1));
        for (r, (a, b)) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)]
            .iter()
            .enumerate()
        {
            m[(r, *a)] = int(0);
            m[(r, *b)] = int(0);
        }
        assert!(matches!(detect_cyclic_labeling(&m), Err(Error::Pattern(_))));
        assert!(matches!(
            detect_cyclic_labeling(&Matrix::identity(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn reduction_of_v_is_a_fixed_point() {
        let psi = h7_psi();
        let red = reduce_to_psi(&build_v(&psi)).unwrap();
        assert_eq!(red.psi, psi);
        assert!(red.c.iter().all(|c| *c == int(1)));
        assert_eq!(red.scaled(&build_v(&psi)), red.target());
    }

    #[test]
    fn reduction_forces_unit_middle_constants() {
        let v = canonical_sample();
        let rows: Vec<Scalar> = (1..=7).map(|k| rat(k, 3)).collect();
        let cols: Vec<Scalar> = (1..=7).map(|k| rat(11, k + 1)).collect();
        let m = v.scale_rows(&rows).scale_cols(&cols);
        let red = reduce_to_psi(&m).unwrap();
        assert_eq!(red.psi, h7_psi());
        assert_eq!(&red.c[2..5], &[int(1), int(1), int(1)]);
        assert_eq!(red.scaled(&m), red.target());
    }

    #[test]
    fn reduction_rejects_wrong_rank() {
        // canonical pattern with generic positive entries has full rank
        let m = Matrix::from_fn(7, 7, |r, c| {
            if is_structural_zero(r as i64 + 1, c as i64 + 1) {
                int(0)
            } else {
                int(((r * 7 + c) % 5 + 1) as i64)
            }
        });
        assert!(matches!(
            reduce_to_psi(&m),
            Err(Error::Rank { found: 7, .. })
        ));
    }

    #[test]
    fn factor_relabeled_scaled_v() {
        let v = canonical_sample();
        let m = v
            .scale_rows(&(1..=7).map(|k| rat(2 * k + 1, 5)).collect::<Vec<_>>())
            .select_rows(&[4, 0, 6, 2, 1, 5, 3])
            .select_cols(&[3, 6, 0, 1, 5, 2, 4]);
        let cert = factor_cyclic7(&m).unwrap();
        assert!(cert.certifies(&m));
    }
}
