use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};

/// A scaled permutation matrix with strictly positive scales.
///
/// Row `i` holds its only nonzero, `scales[i]`, in column `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    scales: Vec<Scalar>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<usize>, scales: Vec<Scalar>) -> Result<Self> {
        let n = perm.len();
        if scales.len() != n {
            return Err(Error::Dimension(format!(
                "{n} permutation targets but {} scales",
                scales.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Internal(format!("{perm:?} is not a permutation")));
            }
        }
        if let Some(i) = scales.iter().position(|s| !s.is_positive()) {
            return Err(Error::Internal(format!(
                "monomial scale {i} is not positive"
            )));
        }
        Ok(MonomialMatrix { perm, scales })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMatrix {
            perm: (0..n).collect(),
            scales: vec![Scalar::one(); n],
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![Scalar::one(); n])
    }

    pub fn diagonal(scales: Vec<Scalar>) -> Result<Self> {
        Self::new((0..scales.len()).collect(), scales)
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scales(&self) -> &[Scalar] {
        &self.scales
    }

    /// Entry at `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        if self.perm[i] == j {
            self.scales[i].clone()
        } else {
            Scalar::zero()
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.size(), self.size(), |i, j| self.entry(i, j))
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.size();
        let mut perm = vec![0; n];
        let mut scales = vec![Scalar::zero(); n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            scales[self.perm[i]] = self.scales[i].recip();
        }
        MonomialMatrix { perm, scales }
    }

    /// The product `self * other`.
    pub fn compose(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.size(), other.size());
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let scales = self
            .perm
            .iter()
            .zip(&self.scales)
            .map(|(&p, s)| s * &other.scales[p])
            .collect();
        MonomialMatrix { perm, scales }
    }

    /// `self * m`.
    pub fn apply_left(&self, m: &Matrix) -> Matrix {
        assert_eq!(self.size(), m.rows());
        Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            &self.scales[i] * &m[(self.perm[i], j)]
        })
    }

    /// `m * self`.
    pub fn apply_right(&self, m: &Matrix) -> Matrix {
        assert_eq!(self.size(), m.cols());
        let inv = self.inverse_perm();
        Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            let k = inv[j];
            &m[(i, k)] * &self.scales[k]
        })
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.size()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn sample() -> MonomialMatrix {
        MonomialMatrix::new(vec![2, 0, 1], vec![rat(1, 2), int(3), rat(5, 7)]).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MonomialMatrix::new(vec![0, 0], vec![int(1), int(1)]).is_err());
        assert!(MonomialMatrix::new(vec![1, 0], vec![int(1), int(0)]).is_err());
        assert!(MonomialMatrix::new(vec![1, 0], vec![int(1)]).is_err());
    }

    #[test]
    fn inverse_and_compose_match_dense_products() {
        let q = sample();
        let dense = q.to_matrix();
        assert_eq!(&dense * &q.inverse().to_matrix(), Matrix::identity(3));
        let r = MonomialMatrix::new(vec![1, 2, 0], vec![int(2), rat(1, 3), int(4)]).unwrap();
        assert_eq!(q.compose(&r).to_matrix(), &dense * &r.to_matrix());
    }

    #[test]
    fn applying_matches_dense_products() {
        let q = sample();
        let m = Matrix::from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(q.apply_left(&m), &q.to_matrix() * &m);
        assert_eq!(q.apply_right(&m), &m * &q.to_matrix());
        let wide = Matrix::from_ints(&[[1, 0, 2, 1], [0, 3, 1, 1], [5, 1, 0, 2]]);
        assert_eq!(q.apply_left(&wide), &q.to_matrix() * &wide);
    }
}
