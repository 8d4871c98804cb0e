//! Small fixed inputs shared by tests, benches and the self-test.

use crate::exact::{int, rat, Scalar};
use crate::psi::PsiVector;

/// An irregular convex heptagon with integer vertices, counterclockwise.
pub const H7_VERTICES: [(i64, i64); 7] = [(0, 0), (3, 0), (5, 2), (5, 5), (3, 7), (1, 6), (0, 3)];

pub fn h7_points() -> Vec<(Scalar, Scalar)> {
    H7_VERTICES.iter().map(|&(x, y)| (int(x), int(y))).collect()
}

/// The canonical parameters of the heptagon above; its slack matrix is a
/// positive row and column rescaling of `V` at this vector.
pub fn h7_psi() -> PsiVector {
    PsiVector::new(
        rat(8, 13),
        rat(1, 2),
        rat(1, 5),
        rat(15, 91),
        rat(9, 35),
        rat(3, 5),
    )
}
