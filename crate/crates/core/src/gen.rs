//! Seeded generators for test inputs.
//!
//! Every draw comes from SplitMix64 (state initialized to the seed). An
//! integer in `0..n` is `next_u64() % n`; everything else is built from
//! that with the mappings documented on each function, so a seed fixes the
//! whole sequence.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::exact::{int, mat_rank, rat, Matrix, Scalar};
use crate::hepta::reduce_to_psi;
use crate::polygon::{convex_hull, polygon_from_points, polygon_slack, Point, Polygon2D};
use crate::psi::PsiVector;

pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish integer in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Integer in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// `p / q` with `p` in `lo..=hi` and `q` in `1..=max_den`, drawn in
    /// that order.
    pub fn rational(&mut self, lo: i64, hi: i64, max_den: i64) -> Scalar {
        let p = self.range(lo, hi);
        let q = self.range(1, max_den);
        rat(p, q)
    }

    /// Fisher-Yates, swapping `i` with `below(i + 1)` for `i` from the top.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

fn to_pairs(points: &[Point]) -> Vec<(Scalar, Scalar)> {
    points.iter().map(|p| (p.x.clone(), p.y.clone())).collect()
}

/// Convex hull of 12 points with coordinates `rational(0, 60, 4)`, x
/// before y; redrawn until the hull has exactly seven vertices.
pub fn random_heptagon(rng: &mut Rng) -> Polygon2D {
    loop {
        let pts: Vec<Point> = (0..12)
            .map(|_| {
                let x = rng.rational(0, 60, 4);
                let y = rng.rational(0, 60, 4);
                Point::new(x, y)
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() == 7 {
            return polygon_from_points(&to_pairs(&hull))
                .expect("hull vertices are in convex position");
        }
    }
}

/// Rational point on the unit circle near angle `2 pi * turns`. The angle
/// is split into a quarter turn `k` and a residual `phi` in
/// `[-pi/4, pi/4]`; `s = round(tan(phi / 2) * den) / den` gives
/// `((1 - s^2) / (1 + s^2), 2 s / (1 + s^2))`, rotated `k` quarter turns.
fn circle_point(turns: f64, den: i64) -> Point {
    let quarters = (turns * 4.0).round();
    let phi = (turns * 4.0 - quarters) * std::f64::consts::FRAC_PI_2;
    let s = rat(((phi / 2.0).tan() * den as f64).round() as i64, den);
    let d = int(1) + &s * &s;
    let (mut x, mut y) = ((int(1) - &s * &s) / &d, (int(2) * &s) / &d);
    for _ in 0..(quarters as i64).rem_euclid(4) {
        (x, y) = (-y, x);
    }
    Point::new(x, y)
}

/// Convex `n`-gon: vertex `t` sits on the unit circle at fraction
/// `(t + u_t) / n` of a turn with `u_t = (1 + below(3)) / 4`, rounded with
/// denominator `16 n`; then the affine map `(x, y) -> (a x + b y, c x + d y)`
/// with `a, d = range(2, 4)` and `b, c = range(-1, 1)` is applied. The
/// hull is recomputed and the draw repeated if it lost a vertex.
pub fn random_ngon(rng: &mut Rng, n: usize) -> Polygon2D {
    assert!(n >= 3, "a polygon needs at least three vertices");
    let den = 16 * n as i64;
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|t| {
                let u = (1 + rng.below(3)) as f64 / 4.0;
                circle_point((t as f64 + u) / n as f64, den)
            })
            .collect();
        let (a, b, c, d) = (
            rng.range(2, 4),
            rng.range(-1, 1),
            rng.range(-1, 1),
            rng.range(2, 4),
        );
        let mapped: Vec<Point> = pts
            .iter()
            .map(|p| Point::new(int(a) * &p.x + int(b) * &p.y, int(c) * &p.x + int(d) * &p.y))
            .collect();
        let hull = convex_hull(&mapped);
        if hull.len() == n {
            return polygon_from_points(&to_pairs(&hull))
                .expect("hull vertices are in convex position");
        }
    }
}

/// The canonical parameters of a [`random_heptagon`]'s slack matrix.
pub fn random_admissible_psi(rng: &mut Rng) -> PsiVector {
    let p = random_heptagon(rng);
    let s = polygon_slack(&p).expect("valid polygon").s;
    reduce_to_psi(&s)
        .expect("heptagon slack matrices reduce")
        .psi
}

/// Nonnegative `m x n` matrix of rank exactly `r`: a sum of `r` outer
/// products whose entries are `range(0, 5)`, left vector first; redrawn
/// until the rank is `r`. Needs `r <= min(m, n)`.
pub fn random_rank_r(rng: &mut Rng, m: usize, n: usize, r: usize) -> Matrix {
    assert!(r <= m.min(n), "rank exceeds the shape");
    loop {
        let mut acc = Matrix::zeros(m, n);
        for _ in 0..r {
            let u: Vec<Scalar> = (0..m).map(|_| int(rng.range(0, 5))).collect();
            let v: Vec<Scalar> = (0..n).map(|_| int(rng.range(0, 5))).collect();
            for i in 0..m {
                for j in 0..n {
                    acc[(i, j)] += &u[i] * &v[j];
                }
            }
        }
        if mat_rank(&acc) == r {
            return acc;
        }
    }
}

/// `S * B` for the slack matrix `S` of a [`random_heptagon`] and a 7 x n
/// matrix `B` of convex weights: column `j` is `w / sum(w)` with
/// `w_i = range(0, 4)` (redrawn if all zero). With `with_vertices` and
/// `n >= 7`, seven shuffled columns are replaced by unit vectors so the
/// section has all seven heptagon vertices. Redrawn until rank 3.
pub fn random_rank3_7xn(rng: &mut Rng, n: usize, with_vertices: bool) -> Result<Matrix> {
    loop {
        let s = polygon_slack(&random_heptagon(rng))?.s;
        let mut b = Matrix::zeros(7, n);
        for j in 0..n {
            let w: Vec<i64> = loop {
                let w: Vec<i64> = (0..7).map(|_| rng.range(0, 4)).collect();
                if w.iter().any(|&x| x > 0) {
                    break w;
                }
            };
            let total: i64 = w.iter().sum();
            for (i, &wi) in w.iter().enumerate() {
                b[(i, j)] = rat(wi, total);
            }
        }
        if with_vertices && n >= 7 {
            let mut cols: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut cols);
            for (t, &j) in cols.iter().take(7).enumerate() {
                for i in 0..7 {
                    b[(i, j)] = int((i == t) as i64);
                }
            }
        }
        let a = &s * &b;
        if mat_rank(&a) == 3 {
            return Ok(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::is_admissible;

    #[test]
    fn splitmix_reference_values() {
        let mut r = Rng::new(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(r.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_heptagon(&mut Rng::new(5));
        let b = random_heptagon(&mut Rng::new(5));
        assert_eq!(a, b);
        assert_ne!(a, random_heptagon(&mut Rng::new(6)));
    }

    #[test]
    fn circle_points_lie_on_the_circle() {
        for k in 0..40 {
            let p = circle_point(k as f64 / 40.0 + 0.01, 64);
            assert_eq!(&p.x * &p.x + &p.y * &p.y, int(1));
        }
    }

    #[test]
    fn ngons_have_the_requested_size() {
        let mut rng = Rng::new(1);
        for n in [3, 4, 7, 13, 30] {
            assert_eq!(random_ngon(&mut rng, n).len(), n);
        }
    }

    #[test]
    fn generated_inputs_have_the_promised_shape() {
        let mut rng = Rng::new(2);
        for _ in 0..5 {
            assert!(is_admissible(&random_admissible_psi(&mut rng)));
        }
        for r in 0..=3 {
            let m = random_rank_r(&mut rng, 5, 8, r);
            assert_eq!(mat_rank(&m), r);
            assert!(m.is_nonnegative());
        }
        let a = random_rank3_7xn(&mut rng, 12, true).unwrap();
        assert_eq!(a.shape(), (7, 12));
        assert!(a.is_nonnegative());
    }
}
