//! Sections of the standard simplex by the column space of a rank-3
//! nonnegative matrix, and the factorizations they induce.
//!
//! Once its columns are normalized to unit sum, a nonnegative matrix `A`
//! with seven rows has all its columns inside the polygon cut from the
//! simplex by the column space of `A`. That polygon has at most seven
//! vertices, and writing each column as a convex combination of the
//! vertices gives `A = S * B` with both factors nonnegative.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{mat_rank, pivot_columns, solve_linear, Matrix, Scalar, Solve};
use crate::hepta::factor_cyclic7;
use crate::nmf::{Factorization, Method};

/// A matrix with its zero columns removed and the rest scaled to unit sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedColumns {
    pub matrix: Matrix,
    pub sums: Vec<Scalar>,
    /// Original indices of the columns kept in `matrix`.
    pub kept: Vec<usize>,
    pub zero_cols: Vec<usize>,
    pub total_cols: usize,
}

impl NormalizedColumns {
    /// Turns a right factor for `matrix` into one for the original input:
    /// rescales column `j` by `sums[j]` and reinserts zero columns.
    pub fn restore(&self, right: &Matrix) -> Matrix {
        right
            .scale_cols(&self.sums)
            .spread_cols(&self.kept, self.total_cols)
    }
}

pub fn normalize_columns(a: &Matrix) -> Result<NormalizedColumns> {
    a.require_nonnegative()?;
    let (mut kept, mut zero_cols, mut sums) = (Vec::new(), Vec::new(), Vec::new());
    for j in 0..a.cols() {
        let sum: Scalar = a.column(j).iter().sum();
        if sum.is_zero() {
            zero_cols.push(j);
        } else {
            kept.push(j);
            sums.push(sum);
        }
    }
    let inverse: Vec<Scalar> = sums.iter().map(Scalar::recip).collect();
    let matrix = a.select_cols(&kept).scale_cols(&inverse);
    Ok(NormalizedColumns {
        matrix,
        sums,
        kept,
        zero_cols,
        total_cols: a.cols(),
    })
}

type Point2 = [Scalar; 2];

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Scalar {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionVertex {
    /// Coordinates in the affine chart `origin + s * axis_u + t * axis_v`.
    pub chart: Point2,
    /// The same point in the simplex.
    pub ambient: Vec<Scalar>,
    /// Rows whose coordinate vanishes at this vertex.
    pub tight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPolygon {
    pub origin: Vec<Scalar>,
    pub axis_u: Vec<Scalar>,
    pub axis_v: Vec<Scalar>,
    /// Counterclockwise in the chart.
    pub vertices: Vec<SectionVertex>,
    /// Ambient vertex coordinates as columns.
    pub s: Matrix,
}

/// The half-plane `offset + u * s + v * t >= 0` of the chart.
#[derive(Debug, Clone)]
struct Constraint {
    u: Scalar,
    v: Scalar,
    offset: Scalar,
}

impl Constraint {
    fn eval(&self, p: &Point2) -> Scalar {
        &self.offset + &self.u * &p[0] + &self.v * &p[1]
    }

    fn same_half_plane(&self, other: &Constraint) -> bool {
        let (a, b) = (
            [&self.u, &self.v, &self.offset],
            [&other.u, &other.v, &other.offset],
        );
        let proportional = (0..3).all(|i| (0..3).all(|j| a[i] * b[j] == a[j] * b[i]));
        proportional && (0..3).all(|i| !(a[i] * b[i]).is_negative())
    }

    fn meet(&self, other: &Constraint) -> Option<Point2> {
        let det = &self.u * &other.v - &other.u * &self.v;
        if det.is_zero() {
            return None;
        }
        let s = (-&self.offset * &other.v + &other.offset * &self.v) / &det;
        let t = (-&self.u * &other.offset + &other.u * &self.offset) / &det;
        Some([s, t])
    }
}

impl SectionPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ambient_point(&self, chart: &Point2) -> Vec<Scalar> {
        self.origin
            .iter()
            .zip(self.axis_u.iter().zip(&self.axis_v))
            .map(|(o, (u, v))| o + u * &chart[0] + v * &chart[1])
            .collect()
    }

    /// Chart coordinates of an ambient point, or `None` off the chart plane.
    pub fn chart_coordinates(&self, p: &[Scalar]) -> Result<Option<Point2>> {
        let n = self.origin.len();
        if p.len() != n {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, section lives in dimension {n}",
                p.len()
            )));
        }
        let axes = Matrix::from_fn(n, 2, |i, j| {
            if j == 0 {
                self.axis_u[i].clone()
            } else {
                self.axis_v[i].clone()
            }
        });
        let rhs: Vec<Scalar> = p.iter().zip(&self.origin).map(|(x, o)| x - o).collect();
        Ok(match solve_linear(&axes, &rhs)? {
            Solve::Solution(x) => {
                let [s, t]: [Scalar; 2] = x.try_into().expect("two unknowns");
                Some([s, t])
            }
            Solve::Inconsistent { .. } => None,
        })
    }
}

/// Intersects the simplex with the column space of a rank-3 nonnegative
/// matrix, returning the polygon with its vertices counterclockwise.
pub fn section_polygon(a: &Matrix) -> Result<SectionPolygon> {
    let norm = normalize_columns(a)?;
    let rank = mat_rank(&norm.matrix);
    if rank != 3 {
        return Err(Error::Rank {
            expected: "3".into(),
            found: rank,
        });
    }
    let pivots = pivot_columns(&norm.matrix);
    let origin = norm.matrix.column(pivots[0]);
    let diff = |j: usize| -> Vec<Scalar> {
        norm.matrix
            .column(j)
            .iter()
            .zip(&origin)
            .map(|(x, o)| x - o)
            .collect()
    };
    let (axis_u, axis_v) = (diff(pivots[1]), diff(pivots[2]));

    let constraints: Vec<Constraint> = (0..a.rows())
        .map(|i| Constraint {
            u: axis_u[i].clone(),
            v: axis_v[i].clone(),
            offset: origin[i].clone(),
        })
        .collect();
    // constant coordinates never bound the polygon; repeated half-planes
    // contribute one edge line
    let mut lines: Vec<&Constraint> = Vec::new();
    for c in &constraints {
        if c.u.is_zero() && c.v.is_zero() {
            continue;
        }
        if !lines.iter().any(|l| l.same_half_plane(c)) {
            lines.push(c);
        }
    }

    let mut points: Vec<Point2> = Vec::new();
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let Some(p) = l1.meet(l2) else { continue };
            if constraints.iter().all(|c| !c.eval(&p).is_negative()) && !points.contains(&p) {
                points.push(p);
            }
        }
    }
    if points.len() < 3 {
        return Err(Error::DegenerateSection(format!(
            "section has only {} extreme points",
            points.len()
        )));
    }
    sort_counterclockwise(&mut points);
    let k = points.len();
    for i in 0..k {
        if !cross(&points[i], &points[(i + 1) % k], &points[(i + 2) % k]).is_positive() {
            return Err(Error::DegenerateSection(
                "section polygon is not strictly convex".into(),
            ));
        }
    }

    let mut poly = SectionPolygon {
        origin,
        axis_u,
        axis_v,
        vertices: Vec::with_capacity(k),
        s: Matrix::zeros(a.rows(), k),
    };
    for (t, chart) in points.into_iter().enumerate() {
        let ambient = poly.ambient_point(&chart);
        let tight: Vec<usize> = (0..ambient.len())
            .filter(|&i| ambient[i].is_zero())
            .collect();
        if k == 7 && tight.len() != 2 {
            return Err(Error::Tangency {
                vertex: t,
                tight: tight.len(),
            });
        }
        for (i, x) in ambient.iter().enumerate() {
            poly.s[(i, t)] = x.clone();
        }
        poly.vertices.push(SectionVertex {
            chart,
            ambient,
            tight,
        });
    }
    Ok(poly)
}

/// Sorts points by angle around their centroid, starting from the
/// direction of the positive first axis.
fn sort_counterclockwise(points: &mut [Point2]) {
    let n = Scalar::from_integer(points.len().into());
    let centroid: Point2 = [
        points.iter().map(|p| p[0].clone()).sum::<Scalar>() / &n,
        points.iter().map(|p| p[1].clone()).sum::<Scalar>() / &n,
    ];
    let half = |p: &Point2| -> u8 {
        let (dx, dy) = (&p[0] - &centroid[0], &p[1] - &centroid[1]);
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    points.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let c = cross(&centroid, a, b);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

/// Writes an ambient point of the polygon as a convex combination of its
/// vertices using the fan of triangles at vertex 0. At most three
/// coefficients are nonzero.
pub fn convex_coefficients(poly: &SectionPolygon, p: &[Scalar]) -> Result<Vec<Scalar>> {
    let q = poly.chart_coordinates(p)?.ok_or(Error::OutsidePolygon)?;
    let k = poly.len();
    let v = |i: usize| &poly.vertices[i].chart;
    for i in 1..k - 1 {
        let inside = !cross(v(0), v(i), &q).is_negative()
            && !cross(v(i), v(i + 1), &q).is_negative()
            && !cross(v(i + 1), v(0), &q).is_negative();
        if !inside {
            continue;
        }
        let corners = [0, i, i + 1];
        let system = Matrix::from_fn(3, 3, |r, c| match r {
            0 => Scalar::one(),
            _ => v(corners[c])[r - 1].clone(),
        });
        let rhs = [Scalar::one(), q[0].clone(), q[1].clone()];
        let bary = solve_linear(&system, &rhs)?
            .solution()
            .ok_or_else(|| Error::Internal("degenerate fan triangle".into()))?;
        let mut coeffs = vec![Scalar::zero(); k];
        for (c, w) in corners.iter().zip(bary) {
            coeffs[*c] = w;
        }
        let rebuilt = &poly.s * &Matrix::column_vector(coeffs.clone());
        if rebuilt.column(0) != p || coeffs.iter().any(Signed::is_negative) {
            return Err(Error::Internal(
                "barycentric coefficients do not reproduce the point".into(),
            ));
        }
        return Ok(coeffs);
    }
    Err(Error::OutsidePolygon)
}

/// Factors a nonnegative rank-3 matrix with seven rows with inner
/// dimension at most 6.
pub fn factor_7xn(a: &Matrix) -> Result<Factorization> {
    if a.rows() != 7 {
        return Err(Error::Dimension(format!(
            "expected 7 rows, got {}",
            a.rows()
        )));
    }
    let poly = section_polygon(a)?;
    let norm = normalize_columns(a)?;
    let k = poly.len();
    let mut b = Matrix::zeros(k, norm.matrix.cols());
    for j in 0..norm.matrix.cols() {
        for (i, w) in convex_coefficients(&poly, &norm.matrix.column(j))?
            .into_iter()
            .enumerate()
        {
            b[(i, j)] = w;
        }
    }
    let factors = if k <= 6 {
        Factorization {
            left: poly.s,
            right: norm.restore(&b),
            method: Method::Section { vertices: k },
        }
    } else {
        let cert = factor_cyclic7(&poly.s)?;
        Factorization {
            right: norm.restore(&(&cert.g * &b)),
            left: cert.f,
            method: Method::Heptagon {
                steps: cert.steps_taken,
                reversed: cert.reversed,
            },
        }
    };
    log::debug!("7-row block factored via {:?}", factors.method);
    Ok(factors)
}

/// Nonnegative factorization with inner dimension equal to the rank, for
/// nonnegative matrices of rank at most 2.
pub fn factor_low_rank(a: &Matrix) -> Result<Factorization> {
    a.require_nonnegative()?;
    let rank = mat_rank(a);
    let (m, n) = a.shape();
    let (left, right) = match rank {
        0 => (Matrix::zeros(m, 0), Matrix::zeros(0, n)),
        1 => {
            let j0 = (0..n).find(|&j| !a.is_zero_col(j)).expect("rank 1");
            let base = a.column(j0);
            let i0 = (0..m)
                .find(|&i| !base[i].is_zero())
                .expect("nonzero column");
            let ratios: Vec<Scalar> = (0..n).map(|j| &a[(i0, j)] / &base[i0]).collect();
            (Matrix::column_vector(base), Matrix::from_vec(1, n, ratios)?)
        }
        2 => {
            let norm = normalize_columns(a)?;
            let cols = norm.matrix.cols();
            let pivots = pivot_columns(&norm.matrix);
            let p = norm.matrix.column(pivots[0]);
            let d: Vec<Scalar> = norm
                .matrix
                .column(pivots[1])
                .iter()
                .zip(&p)
                .map(|(q, p)| q - p)
                .collect();
            let r = d
                .iter()
                .position(|x| !x.is_zero())
                .expect("distinct pivots");
            // position of each normalized column along p + tau * d
            let tau: Vec<Scalar> = (0..cols)
                .map(|j| (&norm.matrix[(r, j)] - &p[r]) / &d[r])
                .collect();
            let lo = (0..cols)
                .min_by(|&x, &y| tau[x].cmp(&tau[y]))
                .expect("columns");
            let hi = (0..cols)
                .max_by(|&x, &y| tau[x].cmp(&tau[y]))
                .expect("columns");
            let width = &tau[hi] - &tau[lo];
            let mut b = Matrix::zeros(2, cols);
            for j in 0..cols {
                let w = (&tau[j] - &tau[lo]) / &width;
                b[(0, j)] = Scalar::one() - &w;
                b[(1, j)] = w;
            }
            let ends = norm.matrix.select_cols(&[lo, hi]);
            (ends, norm.restore(&b))
        }
        _ => {
            return Err(Error::Rank {
                expected: "at most 2".into(),
                found: rank,
            })
        }
    };
    let fact = Factorization {
        left,
        right,
        method: Method::LowRank { rank },
    };
    if &fact.left * &fact.right != *a {
        return Err(Error::Internal(
            "low-rank factors do not reproduce the input".into(),
        ));
    }
    Ok(fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn e(i: usize) -> Vec<Scalar> {
        (0..7).map(|k| int((k == i) as i64)).collect()
    }

    #[test]
    fn normalize_records_sums_and_zero_columns() {
        let a = Matrix::from_ints(&[[2, 0, 1], [0, 0, 1], [2, 0, 0]]);
        let n = normalize_columns(&a).unwrap();
        assert_eq!(n.matrix.column(0), vec![rat(1, 2), int(0), rat(1, 2)]);
        assert_eq!(n.sums, vec![int(4), int(2)]);
        assert_eq!(n.zero_cols, vec![1]);
        assert_eq!(n.restore(&n.matrix), a);
    }

    #[test]
    fn coordinate_face_gives_a_triangle() {
        let a = Matrix::identity(7).select_cols(&[0, 1, 2]);
        let poly = section_polygon(&a).unwrap();
        assert_eq!(poly.len(), 3);
        let mut ambient: Vec<Vec<Scalar>> =
            poly.vertices.iter().map(|v| v.ambient.clone()).collect();
        ambient.sort();
        let mut expected = vec![e(0), e(1), e(2)];
        expected.sort();
        assert_eq!(ambient, expected);
    }

    #[test]
    fn vertex_and_midpoint_coefficients() {
        let a = Matrix::from_ints(&[
            [1, 0, 0, 1],
            [0, 1, 0, 1],
            [0, 0, 1, 0],
            [1, 1, 0, 2],
            [0, 1, 1, 1],
            [1, 0, 1, 1],
            [1, 1, 1, 2],
        ]);
        let poly = section_polygon(&a).unwrap();
        let k = poly.len();
        let unit = convex_coefficients(&poly, &poly.vertices[1].ambient).unwrap();
        assert_eq!(unit.iter().filter(|c| c.is_one()).count(), 1);
        assert_eq!(unit[1], int(1));
        let mid: Vec<Scalar> = poly.vertices[1]
            .ambient
            .iter()
            .zip(&poly.vertices[2].ambient)
            .map(|(x, y)| (x + y) / int(2))
            .collect();
        let c = convex_coefficients(&poly, &mid).unwrap();
        let mut expected = vec![int(0); k];
        expected[1] = rat(1, 2);
        expected[2] = rat(1, 2);
        assert_eq!(c, expected);
    }

    #[test]
    fn points_off_the_polygon_are_rejected() {
        let a = Matrix::identity(7).select_cols(&[0, 1, 2]);
        let poly = section_polygon(&a).unwrap();
        assert_eq!(
            convex_coefficients(&poly, &e(4)),
            Err(Error::OutsidePolygon)
        );
        let mut outside = vec![int(0); 7];
        outside[0] = int(2);
        outside[1] = int(-1);
        assert_eq!(
            convex_coefficients(&poly, &outside),
            Err(Error::OutsidePolygon)
        );
    }

    #[test]
    fn low_rank_cases() {
        let zero = Matrix::zeros(3, 4);
        let f = factor_low_rank(&zero).unwrap();
        assert_eq!((f.left.shape(), f.right.shape()), ((3, 0), (0, 4)));
        assert_eq!(&f.left * &f.right, zero);

        let outer = Matrix::from_ints(&[[2, 4, 0, 6], [1, 2, 0, 3], [3, 6, 0, 9]]);
        let f = factor_low_rank(&outer).unwrap();
        assert_eq!(f.left.cols(), 1);
        assert_eq!(&f.left * &f.right, outer);

        let two = Matrix::from_ints(&[
            [1, 0, 1, 2, 0],
            [0, 1, 1, 1, 0],
            [1, 1, 2, 3, 0],
            [0, 0, 0, 0, 0],
        ]);
        let f = factor_low_rank(&two).unwrap();
        assert_eq!(f.left.cols(), 2);
        assert!(f.left.is_nonnegative() && f.right.is_nonnegative());
        assert_eq!(&f.left * &f.right, two);

        assert!(matches!(
            factor_low_rank(&Matrix::identity(3)),
            Err(Error::Rank { found: 3, .. })
        ));
    }

    #[test]
    fn factor_7xn_with_small_section() {
        let a = Matrix::identity(7)
            .select_cols(&[0, 1, 2, 1, 0])
            .scale_cols(&[int(3), int(1), int(2), int(5), rat(1, 2)]);
        let f = factor_7xn(&a).unwrap();
        assert_eq!(f.method, Method::Section { vertices: 3 });
        assert_eq!(&f.left * &f.right, a);
    }
}
