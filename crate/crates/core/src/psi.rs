//! The six-parameter family of canonical 7x7 matrices and their rank-6
//! nonnegative factorizations.
//!
//! A [`PsiVector`] `(a1, a2, a3, b1, b2, b3)` fixes seven points of the
//! projective plane, the rows of [`build_w`]. The canonical matrix
//! [`build_v`] collects the 3x3 determinants `det W[i-1, j-2, j-1]` with
//! all indices taken cyclically in `1..=7`. Rows and columns are stored
//! 0-based; the helpers here accept the 1-based cyclic labels directly.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{det3_rows, format_scalar, int, Matrix, Scalar};
use crate::monomial::MonomialMatrix;

/// 0-based position of the cyclic label `k` (any integer, read mod 7).
pub fn cyc(k: i64) -> usize {
    (k - 1).rem_euclid(7) as usize
}

/// True when `(i, j)`, 1-based cyclic labels, is a structural zero of the
/// heptagon pattern, i.e. `i` is `j - 1` or `j` mod 7.
pub fn is_structural_zero(i: i64, j: i64) -> bool {
    cyc(i) == cyc(j - 1) || cyc(i) == cyc(j)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PsiVector {
    pub a1: Scalar,
    pub a2: Scalar,
    pub a3: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    pub b3: Scalar,
}

impl PsiVector {
    pub fn new(a1: Scalar, a2: Scalar, a3: Scalar, b1: Scalar, b2: Scalar, b3: Scalar) -> Self {
        PsiVector {
            a1,
            a2,
            a3,
            b1,
            b2,
            b3,
        }
    }

    pub fn from_array([a1, a2, a3, b1, b2, b3]: [Scalar; 6]) -> Self {
        Self::new(a1, a2, a3, b1, b2, b3)
    }

    pub fn to_array(&self) -> [Scalar; 6] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.b1.clone(),
            self.b2.clone(),
            self.b3.clone(),
        ]
    }

    /// `a_k + b_k` for `k` in `1..=3`.
    pub fn pair_sum(&self, k: usize) -> Scalar {
        match k {
            1 => &self.a1 + &self.b1,
            2 => &self.a2 + &self.b2,
            3 => &self.a3 + &self.b3,
            _ => panic!("pair index {k} out of range"),
        }
    }
}

impl fmt::Debug for PsiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_array().iter().map(format_scalar).collect();
        write!(f, "Psi({})", parts.join(", "))
    }
}

/// The 7x3 matrix whose rows are `(0,1,1), (0,0,1), (1,0,0), (1,1,0)`,
/// then `(a_k, 1, b_k)` for `k = 1, 2, 3`.
pub fn build_w(psi: &PsiVector) -> Matrix {
    let (z, o) = (Scalar::zero(), Scalar::one());
    Matrix::from_rows(vec![
        vec![z.clone(), o.clone(), o.clone()],
        vec![z.clone(), z.clone(), o.clone()],
        vec![o.clone(), z.clone(), z.clone()],
        vec![o.clone(), o.clone(), z],
        vec![psi.a1.clone(), o.clone(), psi.b1.clone()],
        vec![psi.a2.clone(), o.clone(), psi.b2.clone()],
        vec![psi.a3.clone(), o, psi.b3.clone()],
    ])
    .expect("fixed shape")
}

pub fn build_v(psi: &PsiVector) -> Matrix {
    let w = build_w(psi);
    Matrix::from_fn(7, 7, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        det3_rows(w.row(cyc(i - 1)), w.row(cyc(j - 2)), w.row(cyc(j - 1)))
    })
}

/// `V(psi)` as a lookup by 1-based labels.
struct Labeled<'a>(&'a Matrix);

impl Labeled<'_> {
    fn at(&self, i: i64, j: i64) -> &Scalar {
        &self.0[(cyc(i), cyc(j))]
    }
}

/// First non-structural entry of `V(psi)` that is not strictly positive,
/// as 1-based labels with its value.
pub fn admissibility_violation(psi: &PsiVector) -> Option<(usize, usize, Scalar)> {
    let v = build_v(psi);
    (1..=7i64)
        .flat_map(|i| (1..=7i64).map(move |j| (i, j)))
        .filter(|&(i, j)| !is_structural_zero(i, j))
        .find(|&(i, j)| !v[(cyc(i), cyc(j))].is_positive())
        .map(|(i, j)| (i as usize, j as usize, v[(cyc(i), cyc(j))].clone()))
}

pub fn is_admissible(psi: &PsiVector) -> bool {
    admissibility_violation(psi).is_none()
}

fn require_admissible(psi: &PsiVector) -> Result<()> {
    match admissibility_violation(psi) {
        Some((row, col, value)) => Err(Error::NotAdmissible {
            row,
            col,
            value: format_scalar(&value),
        }),
        None => Ok(()),
    }
}

/// Reversal symmetry: returns `(b3, b2, b1, a3, a2, a1)` with the row
/// permutation `(16)(25)(34)` and column permutation `(17)(26)(35)`
/// satisfying `rows * V(reversed) * cols = V(psi)`.
pub fn reverse_psi(psi: &PsiVector) -> (PsiVector, MonomialMatrix, MonomialMatrix) {
    let reversed = PsiVector::new(
        psi.b3.clone(),
        psi.b2.clone(),
        psi.b1.clone(),
        psi.a3.clone(),
        psi.a2.clone(),
        psi.a1.clone(),
    );
    let rows = MonomialMatrix::permutation(vec![5, 4, 3, 2, 1, 0, 6]).expect("involution");
    let cols = MonomialMatrix::permutation(vec![6, 5, 4, 3, 2, 1, 0]).expect("involution");
    (reversed, rows, cols)
}

/// One application of the cyclic recurrence together with its conjugators:
/// `V(psi) = q1 * V(next) * q2`.
#[derive(Debug, Clone)]
pub struct PsiStep {
    pub next: PsiVector,
    pub q1: MonomialMatrix,
    pub q2: MonomialMatrix,
}

pub fn psi_step(psi: &PsiVector) -> Result<PsiStep> {
    require_admissible(psi)?;
    let PsiVector {
        a1,
        a2,
        a3,
        b1,
        b2,
        b3,
    } = psi;
    let one = Scalar::one();
    let c3 = &one - b3;
    let next = PsiVector::new(
        (&one - a3 - b3) / &c3,
        (a1 - a1 * b3 - a3 + a3 * b1) / (a1 * &c3),
        (a2 - a2 * b3 - a3 + a3 * b2) / (a2 * &c3),
        a3.clone(),
        a3 / a1,
        a3 / a2,
    );
    let q1 = MonomialMatrix::new(
        vec![1, 2, 3, 4, 5, 6, 0],
        vec![
            one.clone(),
            one.clone(),
            c3.recip(),
            a3.recip(),
            a3.recip(),
            a1 / a3,
            a2 / a3,
        ],
    )?;
    let q2 = MonomialMatrix::new(
        vec![6, 0, 1, 2, 3, 4, 5],
        vec![
            a1 * a2 * &c3 / a3,
            a2 * &c3,
            a3 * &c3,
            a3.clone(),
            one,
            &c3 / a3,
            a1 * &c3 / a3,
        ],
    )?;
    if let Some((i, j, value)) = admissibility_violation(&next) {
        return Err(Error::TheoryViolation(format!(
            "psi step left the admissible set at V({i}, {j}) = {}",
            format_scalar(&value)
        )));
    }
    Ok(PsiStep { next, q1, q2 })
}

/// The `t`-th term of the recurrence started at `psi`.
pub fn psi_orbit(psi: &PsiVector, t: usize) -> Result<PsiVector> {
    require_admissible(psi)?;
    let mut current = psi.clone();
    for _ in 0..t {
        current = psi_step(&current)?.next;
    }
    Ok(current)
}

/// Whether `a1 + b1 >= a2 + b2` and `a3 + b3 >= a2 + b2`.
pub fn middle_is_min(psi: &PsiVector) -> bool {
    let mid = psi.pair_sum(2);
    psi.pair_sum(1) >= mid && psi.pair_sum(3) >= mid
}

/// Explicit factorization `V(psi) = F * G` with `F` 7x6 and `G` 6x7,
/// available when the middle pair sum is the smallest. Returns `Ok(None)`
/// when that condition fails.
pub fn middle_min_factor(psi: &PsiVector) -> Result<Option<(Matrix, Matrix)>> {
    require_admissible(psi)?;
    if !middle_is_min(psi) {
        return Ok(None);
    }
    let vm = build_v(psi);
    let v = Labeled(&vm);
    let z = Scalar::zero();
    let o = Scalar::one();
    let d_front = &psi.a1 - &psi.a2 + &psi.b1 - &psi.b2;
    let d_back = -&psi.a2 + &psi.a3 - &psi.b2 + &psi.b3;
    let (v41, v47, v61, v31, v37) = (v.at(4, 1), v.at(4, 7), v.at(6, 1), v.at(3, 1), v.at(3, 7));
    let f = Matrix::from_rows(vec![
        vec![
            z.clone(),
            z.clone(),
            o.clone(),
            v41 + v47,
            v61.clone(),
            z.clone(),
        ],
        vec![
            z.clone(),
            z.clone(),
            z.clone(),
            o.clone(),
            d_front,
            o.clone(),
        ],
        vec![
            v31.clone(),
            z.clone(),
            z.clone(),
            o.clone(),
            v37.clone(),
            z.clone(),
        ],
        vec![
            v41.clone(),
            o.clone(),
            z.clone(),
            z.clone(),
            v47.clone(),
            z.clone(),
        ],
        vec![
            d_back,
            o.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            o.clone(),
        ],
        vec![
            v61.clone(),
            v31 + v37,
            o.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        vec![
            z.clone(),
            v31.clone(),
            o.clone(),
            v47.clone(),
            z.clone(),
            z.clone(),
        ],
    ])?;
    let (v13, v65, v57, v72) = (v.at(1, 3), v.at(6, 5), v.at(5, 7), v.at(7, 2));
    let g = Matrix::from_rows(vec![
        vec![
            o.clone(),
            v.at(3, 2) / v31,
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        vec![
            z.clone(),
            v.at(2, 1) / v31,
            o.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        vec![
            z.clone(),
            z.clone(),
            v13.clone(),
            o.clone(),
            v65.clone(),
            z.clone(),
            z.clone(),
        ],
        vec![
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            o.clone(),
            v57 / v47,
            z.clone(),
        ],
        vec![
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            v65 / v47,
            o.clone(),
        ],
        vec![
            v72.clone(),
            z.clone(),
            z.clone(),
            o,
            z.clone(),
            z,
            v57.clone(),
        ],
    ])?;
    Ok(Some((f, g)))
}

/// Nonnegative factorization of a 7x7 matrix with inner dimension 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank6Certificate {
    pub f: Matrix,
    pub g: Matrix,
    /// Number of recurrence steps between the input and the factored term.
    pub steps_taken: usize,
    /// Whether the factored orbit was that of the reversed vector.
    pub reversed: bool,
}

impl Rank6Certificate {
    /// Number of orbit terms examined before the factorization was found.
    pub fn search_len(&self) -> usize {
        self.steps_taken + 1 + if self.reversed { 7 } else { 0 }
    }

    /// Exact check of `F * G == target` with both factors nonnegative.
    pub fn certifies(&self, target: &Matrix) -> bool {
        self.f.shape() == (7, 6)
            && self.g.shape() == (6, 7)
            && self.f.is_nonnegative()
            && self.g.is_nonnegative()
            && self.f.checked_mul(&self.g).is_ok_and(|p| &p == target)
    }
}

/// Walks the orbit of `psi` for seven terms and returns the first
/// factorization found, transported back to `V(psi)`.
pub(crate) fn search_orbit(psi: &PsiVector) -> Result<Option<Rank6Certificate>> {
    let mut current = psi.clone();
    let mut chain: Vec<PsiStep> = Vec::new();
    for t in 0..7 {
        if let Some((mut f, mut g)) = middle_min_factor(&current)? {
            for step in chain.iter().rev() {
                f = step.q1.apply_left(&f);
                g = step.q2.apply_right(&g);
            }
            log::debug!("psi orbit factored after {t} steps");
            return Ok(Some(Rank6Certificate {
                f,
                g,
                steps_taken: t,
                reversed: false,
            }));
        }
        let step = psi_step(&current)?;
        current = step.next.clone();
        chain.push(step);
    }
    Ok(None)
}

pub(crate) fn search_reversed(psi: &PsiVector) -> Result<Option<Rank6Certificate>> {
    let (reversed, rows, cols) = reverse_psi(psi);
    Ok(search_orbit(&reversed)?.map(|cert| Rank6Certificate {
        f: rows.apply_left(&cert.f),
        g: cols.apply_right(&cert.g),
        steps_taken: cert.steps_taken,
        reversed: true,
    }))
}

/// Factors `V(psi)` for admissible `psi` as a 7x6 times 6x7 nonnegative
/// product by searching the orbit of `psi`, then that of its reversal.
pub fn factor_admissible_v(psi: &PsiVector) -> Result<Rank6Certificate> {
    require_admissible(psi)?;
    let cert = match search_orbit(psi)? {
        Some(cert) => cert,
        None => search_reversed(psi)?.ok_or_else(|| {
            Error::TheoryViolation(format!(
                "no term in the orbit of {psi:?} or of its reversal has a minimal middle pair"
            ))
        })?,
    };
    if !cert.certifies(&build_v(psi)) {
        return Err(Error::TheoryViolation(format!(
            "assembled factors do not reproduce V({psi:?})"
        )));
    }
    Ok(cert)
}

/// Convenience for tests and fixtures.
pub fn psi_from_ints(a: [i64; 6]) -> PsiVector {
    PsiVector::from_array(a.map(int))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn any_psi() -> impl Strategy<Value = PsiVector> {
        proptest::collection::vec((-30i64..=30, 1i64..=9).prop_map(|(p, q)| rat(p, q)), 6)
            .prop_map(|v| PsiVector::from_array(v.try_into().unwrap()))
    }

    proptest! {
        #[test]
        fn structural_zeros_hold_for_every_vector(psi in any_psi()) {
            let v = build_v(&psi);
            for i in 1..=7 {
                for j in 1..=7 {
                    if is_structural_zero(i, j) {
                        prop_assert!(v[(cyc(i), cyc(j))].is_zero());
                    }
                }
            }
        }

        #[test]
        fn reversal_relabels_every_vector(psi in any_psi()) {
            let (rev, rows, cols) = reverse_psi(&psi);
            prop_assert_eq!(rows.apply_left(&cols.apply_right(&build_v(&rev))), build_v(&psi));
            prop_assert_eq!(reverse_psi(&rev).0, psi);
        }
    }
}
