//! Convex polygons, their slack matrices, and extended formulations built
//! from nonnegative slack factorizations.
//!
//! Given `S = T * U` with `T` (n x k) and `U` (k x n) nonnegative, the
//! polytope `{(x, y) : C x - beta = T y, y >= 0}` in `R^2 x R^k` projects
//! onto the polygon: column `t` of `U` lifts vertex `t`, and `T >= 0`
//! forces every projected point to satisfy `C x >= beta`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_scalar, mat_rank, Matrix, Scalar};
use crate::nmf::{inner_dim_bound, nn_factor, NNFactorization};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }
}

fn turn(a: &Point, b: &Point, c: &Point) -> Scalar {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Vertices of the convex hull, counterclockwise from the lexicographically
/// smallest point. Points on hull edges are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && !turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive()
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// The inequality `normal . x >= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: [Scalar; 2],
    pub offset: Scalar,
}

impl Facet {
    pub fn slack(&self, p: &Point) -> Scalar {
        &self.normal[0] * &p.x + &self.normal[1] * &p.y - &self.offset
    }
}

/// A strictly convex polygon with counterclockwise vertices; facet `i`
/// passes through vertices `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon2D {
    vertices: Vec<Point>,
    facets: Vec<Facet>,
}

impl Polygon2D {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Facet normals as an n x 2 matrix.
    pub fn functionals(&self) -> Matrix {
        Matrix::from_fn(self.len(), 2, |i, j| self.facets[i].normal[j].clone())
    }

    pub fn offsets(&self) -> Vec<Scalar> {
        self.facets.iter().map(|f| f.offset.clone()).collect()
    }
}

/// Scales a nonzero rational vector by a positive factor so that its
/// entries become coprime integers.
fn primitive(v: [Scalar; 2]) -> [Scalar; 2] {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints[0].gcd(&ints[1]);
    [
        Scalar::from_integer(&ints[0] / &gcd),
        Scalar::from_integer(&ints[1] / &gcd),
    ]
}

/// Validates a vertex list and derives the facet inequalities. Clockwise
/// input is reversed.
pub fn polygon_from_points(points: &[(Scalar, Scalar)]) -> Result<Polygon2D> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut vertices: Vec<Point> = points
        .iter()
        .map(|(x, y)| Point::new(x.clone(), y.clone()))
        .collect();
    for i in 0..n {
        if let Some(j) = (i + 1..n).find(|&j| vertices[i] == vertices[j]) {
            return Err(Error::DuplicateVertices(i, j));
        }
    }
    let mut turns = Vec::with_capacity(n);
    for i in 0..n {
        let t = turn(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
        if t.is_zero() {
            return Err(Error::CollinearVertices(i, (i + 1) % n, (i + 2) % n));
        }
        turns.push(t.is_positive());
    }
    if turns.iter().all(|&ccw| !ccw) {
        vertices.reverse();
    } else if !turns.iter().all(|&ccw| ccw) {
        return Err(Error::NotConvex("turn directions alternate".into()));
    }
    for i in 0..n {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
        if let Some(t) = (0..n)
            .filter(|&t| t != i && t != (i + 1) % n)
            .find(|&t| !turn(a, b, &vertices[t]).is_positive())
        {
            return Err(Error::NotConvex(format!(
                "vertex {t} is not strictly inside the edge from {i} to {}",
                (i + 1) % n
            )));
        }
    }
    let facets = (0..n)
        .map(|i| {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            let normal = primitive([-(&b.y - &a.y), &b.x - &a.x]);
            let offset = &normal[0] * &a.x + &normal[1] * &a.y;
            Facet { normal, offset }
        })
        .collect();
    Ok(Polygon2D { vertices, facets })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackMatrixCert {
    pub s: Matrix,
    pub rank: usize,
}

/// `S[i][t] = c_i(p_t) - beta_i`, checked to vanish exactly when `t` is
/// `i` or `i + 1` and to have rank 3.
pub fn polygon_slack(p: &Polygon2D) -> Result<SlackMatrixCert> {
    let n = p.len();
    let s = Matrix::from_fn(n, n, |i, t| p.facets[i].slack(&p.vertices[t]));
    for i in 0..n {
        for t in 0..n {
            let incident = t == i || t == (i + 1) % n;
            if incident != s[(i, t)].is_zero() || s[(i, t)].is_negative() {
                return Err(Error::Internal(format!(
                    "slack ({i}, {t}) = {} contradicts the incidence pattern",
                    format_scalar(&s[(i, t)])
                )));
            }
        }
    }
    let rank = mat_rank(&s);
    if rank != 3 {
        return Err(Error::Internal(format!(
            "slack matrix has rank {rank}, expected 3"
        )));
    }
    Ok(SlackMatrixCert { s, rank })
}

/// The lifted system `C x - beta = T y`, `y >= 0`, with one lift per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedFormulation {
    /// Number of inequalities `y >= 0`.
    pub k: usize,
    pub t: Matrix,
    /// Facet normals, one row per facet.
    pub c: Matrix,
    pub beta: Vec<Scalar>,
    /// Column `t` is the lift of vertex `t`.
    pub lifts: Matrix,
}

pub fn build_extension(p: &Polygon2D) -> Result<ExtendedFormulation> {
    let slack = polygon_slack(p)?;
    let NNFactorization {
        left,
        right,
        inner_dim,
        ..
    } = nn_factor(&slack.s)?;
    Ok(ExtendedFormulation {
        k: inner_dim,
        t: left,
        c: p.functionals(),
        beta: p.offsets(),
        lifts: right,
    })
}

/// Checks both inclusions between the polygon and the projection of the
/// lifted polytope, plus the size bound.
pub fn verify_extension(p: &Polygon2D, ef: &ExtendedFormulation) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = p.len();
    let shapes_ok = ef.t.shape() == (n, ef.k)
        && ef.lifts.shape() == (ef.k, n)
        && ef.c.shape() == (n, 2)
        && ef.beta.len() == n;
    report.record(
        "shapes",
        (!shapes_ok).then(|| {
            format!(
                "n = {n}, k = {}: T is {}x{}, lifts {}x{}, C {}x{}, beta has {}",
                ef.k,
                ef.t.rows(),
                ef.t.cols(),
                ef.lifts.rows(),
                ef.lifts.cols(),
                ef.c.rows(),
                ef.c.cols(),
                ef.beta.len()
            )
        }),
    );
    if !shapes_ok {
        return report;
    }
    let facets_ok = ef.c == p.functionals() && ef.beta == p.offsets();
    report.record(
        "facet inequalities",
        (!facets_ok).then(|| "C and beta do not describe the polygon's facets".to_string()),
    );

    let slack = Matrix::from_fn(n, n, |i, t| p.facets[i].slack(&p.vertices[t]));
    let product = &ef.t * &ef.lifts;
    report.record(
        "slack reconstruction",
        (0..n)
            .flat_map(|i| (0..n).map(move |t| (i, t)))
            .find(|&(i, t)| product[(i, t)] != slack[(i, t)])
            .map(|(i, t)| format!("(T U)({i}, {t}) differs from the slack")),
    );

    let mut lift_failure = None;
    'vertices: for (t, v) in p.vertices.iter().enumerate() {
        if let Some(j) = (0..ef.k).find(|&j| ef.lifts[(j, t)].is_negative()) {
            lift_failure = Some(format!("vertex {t}: lift coordinate {j} is negative"));
            break;
        }
        for i in 0..n {
            let lhs = &ef.c[(i, 0)] * &v.x + &ef.c[(i, 1)] * &v.y - &ef.beta[i];
            let rhs: Scalar = (0..ef.k).map(|j| &ef.t[(i, j)] * &ef.lifts[(j, t)]).sum();
            if lhs != rhs {
                lift_failure = Some(format!("vertex {t}: equality {i} fails"));
                break 'vertices;
            }
        }
    }
    report.record("vertex lifts", lift_failure);

    report.record(
        "nonnegative T",
        ef.t.first_negative()
            .map(|(i, j)| format!("T({i}, {j}) = {} is negative", format_scalar(&ef.t[(i, j)]))),
    );

    let bound = inner_dim_bound(n, n);
    report.record(
        "size bound",
        (ef.k > bound).then(|| format!("{} inequalities exceed ceil(6*{n}/7) = {bound}", ef.k)),
    );
    report
}
