//! Exact rational scalars and dense matrices.
//!
//! Every number handled by the crate is a [`Scalar`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. Matrices are
//! dense and row-major. Elimination always pivots on the first nonzero entry
//! of a column, so every derived object (ranks, bases, solutions) is a
//! deterministic function of the input.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `p/q` as a canonical rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a scalar as `p/q`, or `p` when the denominator is one.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as an exact rational")]
pub struct ParseScalarError(pub String);

/// Parses `p/q`, an integer, or a finite decimal literal (optionally with
/// an exponent such as `1.5e-3`) into an exact rational.
pub fn parse_scalar(text: &str) -> std::result::Result<Scalar, ParseScalarError> {
    let err = || ParseScalarError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Scalar::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let joined = format!("{whole}{frac}");
    let numer = BigInt::from_str(&joined).map_err(|_| err())? * sign;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Scalar::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Scalar::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Shape-explicit constructor; lets empty matrices keep a column count.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn column_vector(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        Matrix {
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// First negative entry in row-major order.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(Signed::is_negative)
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some((row, col)) => Err(Error::NotNonnegative { row, col }),
            None => Ok(()),
        }
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn is_zero_col(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn scale_cols(&self, factors: &[Scalar]) -> Matrix {
        assert_eq!(factors.len(), self.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * &factors[j])
    }

    pub fn scale_rows(&self, factors: &[Scalar]) -> Matrix {
        assert_eq!(factors.len(), self.rows);
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * &factors[i])
    }

    /// Returns a copy with zero rows inserted so that row `i` of `self`
    /// lands at `positions[i]` in a matrix with `total` rows.
    pub fn spread_rows(&self, positions: &[usize], total: usize) -> Matrix {
        assert_eq!(positions.len(), self.rows);
        let mut out = Matrix::zeros(total, self.cols);
        for (i, &p) in positions.iter().enumerate() {
            for j in 0..self.cols {
                out[(p, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn spread_cols(&self, positions: &[usize], total: usize) -> Matrix {
        self.transpose().spread_rows(positions, total).transpose()
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[Matrix]) -> Result<Matrix> {
        let cols = blocks.first().map_or(0, Matrix::cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Dimension(
                "vstack of matrices with unequal widths".into(),
            ));
        }
        let rows = blocks.iter().map(Matrix::rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Matrix::from_vec(rows, cols, data)
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of reducing a matrix to reduced row echelon form.
struct Echelon {
    reduced: Vec<Vec<Scalar>>,
    /// `origin[i]` is the input row that ended up at position `i`.
    origin: Vec<usize>,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination on the first `width` columns, pivoting on the
/// first nonzero entry below the current row.
fn reduce(mut rows: Vec<Vec<Scalar>>, width: usize) -> Echelon {
    let mut origin: Vec<usize> = (0..rows.len()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        origin.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        reduced: rows,
        origin,
        pivots,
    }
}

pub fn mat_rank(m: &Matrix) -> usize {
    reduce(m.to_rows(), m.cols).pivots.len()
}

/// Determinant of a 3x3 matrix by cofactor expansion along the first row.
pub fn det3(m: &Matrix) -> Result<Scalar> {
    if m.shape() != (3, 3) {
        return Err(Error::Dimension(format!(
            "det3 needs a 3x3 matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    Ok(det3_rows(m.row(0), m.row(1), m.row(2)))
}

pub(crate) fn det3_rows(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Scalar {
    let minor = |x: usize, y: usize| &b[x] * &c[y] - &b[y] * &c[x];
    &a[0] * minor(1, 2) - &a[1] * minor(0, 2) + &a[2] * minor(0, 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    Solution(Vec<Scalar>),
    /// The equation at input row `row` reduces to `0 = nonzero`.
    Inconsistent {
        row: usize,
    },
}

impl Solve {
    pub fn solution(self) -> Option<Vec<Scalar>> {
        match self {
            Solve::Solution(x) => Some(x),
            Solve::Inconsistent { .. } => None,
        }
    }
}

/// Finds one solution of `a x = b`, with free variables set to zero.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Solve> {
    if a.rows != b.len() {
        return Err(Error::Dimension(format!(
            "system has {} equations but right-hand side has {} entries",
            a.rows,
            b.len()
        )));
    }
    let augmented: Vec<Vec<Scalar>> = (0..a.rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let ech = reduce(augmented, a.cols);
    let rank = ech.pivots.len();
    if let Some(i) = (rank..a.rows).find(|&i| !ech.reduced[i][a.cols].is_zero()) {
        return Ok(Solve::Inconsistent { row: ech.origin[i] });
    }
    let mut x = vec![Scalar::zero(); a.cols];
    for (i, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.reduced[i][a.cols].clone();
    }
    Ok(Solve::Solution(x))
}

/// Indices of the pivot columns of `m`.
pub fn pivot_columns(m: &Matrix) -> Vec<usize> {
    reduce(m.to_rows(), m.cols).pivots
}

/// The pivot columns of `m`, which form a basis of its column space.
pub fn column_space_basis(m: &Matrix) -> Matrix {
    m.select_cols(&pivot_columns(m))
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn scalar() -> impl Strategy<Value = Scalar> {
        (-50i64..=50, 1i64..=12).prop_map(|(p, q)| rat(p, q))
    }

    fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![Just(Scalar::zero()), scalar()], r * c)
                .prop_map(move |data| Matrix::from_vec(r, c, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn scalars_round_trip_in_canonical_form(x in scalar()) {
            let text = format_scalar(&x);
            prop_assert_eq!(parse_scalar(&text).unwrap(), x.clone());
            prop_assert!(!text.ends_with("/1"));
            prop_assert!(x.denom().is_positive());
        }

        #[test]
        fn rank_is_transpose_invariant(m in matrix(6)) {
            prop_assert_eq!(mat_rank(&m), mat_rank(&m.transpose()));
        }

        #[test]
        fn solutions_substitute_back(a in matrix(5), seed in proptest::collection::vec(scalar(), 5)) {
            let x = Matrix::column_vector(seed[..a.cols()].to_vec());
            let b = (&a * &x).column(0);
            let sol = solve_linear(&a, &b).unwrap().solution().unwrap();
            prop_assert_eq!((&a * &Matrix::column_vector(sol)).column(0), b);
        }

        #[test]
        fn det3_matches_leibniz(e in proptest::collection::vec(scalar(), 9)) {
            let m = Matrix::from_vec(3, 3, e.clone()).unwrap();
            let at = |i: usize, j: usize| &e[3 * i + j];
            let leibniz = at(0, 0) * at(1, 1) * at(2, 2) + at(0, 1) * at(1, 2) * at(2, 0)
                + at(0, 2) * at(1, 0) * at(2, 1)
                - at(0, 2) * at(1, 1) * at(2, 0)
                - at(0, 0) * at(1, 2) * at(2, 1)
                - at(0, 1) * at(1, 0) * at(2, 2);
            prop_assert_eq!(det3(&m).unwrap(), leibniz);
        }
    }
}
