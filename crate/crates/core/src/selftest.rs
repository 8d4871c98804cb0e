//! Seeded property suites for every module, plus the independent oracles
//! they compare against.
//!
//! Property `p` (0-based, in the order listed by [`properties`]) draws from
//! `Rng::new(seed + p * 0x9e3779b97f4a7c15)` (wrapping), so each property's
//! inputs depend only on the seed and its position.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::exact::{det3, format_scalar, mat_rank, parse_scalar, solve_linear, Matrix, Scalar};
use crate::gen::{
    random_admissible_psi, random_heptagon, random_ngon, random_rank3_7xn, random_rank_r, Rng,
};
use crate::hepta::factor_cyclic7;
use crate::monomial::MonomialMatrix;
use crate::nmf::{inner_dim_bound, nn_factor, verify_nn_factorization};
use crate::polygon::{build_extension, polygon_slack, verify_extension};
use crate::psi::{
    build_v, build_w, cyc, factor_admissible_v, is_admissible, is_structural_zero, middle_is_min,
    middle_min_factor, psi_orbit, psi_step, reverse_psi, PsiVector,
};
use crate::section::{convex_coefficients, factor_7xn, normalize_columns, section_polygon};

/// Determinant by the permutation sum, for any square matrix.
pub fn leibniz_det(m: &Matrix) -> Scalar {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(Vec::new(), false)];
        }
        let mut out = Vec::new();
        for (p, odd) in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                // inserting at `pos` moves the new largest element past n-1-pos others
                out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
            }
        }
        out
    }
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    perms(m.rows())
        .into_iter()
        .map(|(p, odd)| {
            let term: Scalar = p
                .iter()
                .enumerate()
                .map(|(i, &j)| m[(i, j)].clone())
                .product();
            if odd {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// `V(psi)` entry by entry from the Leibniz oracle on rows of `W`.
pub fn oracle_v(psi: &PsiVector) -> Matrix {
    let w = build_w(psi);
    Matrix::from_fn(7, 7, |r, c| {
        let (i, j) = (r as i64 + 1, c as i64 + 1);
        leibniz_det(&w.select_rows(&[cyc(i - 1), cyc(j - 2), cyc(j - 1)]))
    })
}

/// Left side and closed form of the three orbit-difference identities, in
/// the order A, B, C.
pub fn sign_identities(psi: &PsiVector) -> crate::Result<[(Scalar, Scalar); 3]> {
    let v = build_v(psi);
    let e = |i: i64, j: i64| v[(cyc(i), cyc(j))].clone();
    let PsiVector {
        a1, a2, a3, b1, b3, ..
    } = psi;
    let diff = |t: usize,
                hi: fn(&PsiVector) -> Scalar,
                lo: fn(&PsiVector) -> Scalar|
     -> crate::Result<Scalar> {
        let p = psi_orbit(psi, t)?;
        Ok(hi(&p) - lo(&p))
    };
    let s12 = |p: &PsiVector| &p.a1 + &p.b1;
    let s22 = |p: &PsiVector| &p.a2 + &p.b2;
    let s33 = |p: &PsiVector| &p.a3 + &p.b3;
    let one = Scalar::one();

    let lhs_a = diff(2, s22, s12)?;
    let rhs_a =
        (-a3 + a2 * (&one - b3)) * e(3, 2) * e(2, 1) / (e(3, 1) * e(7, 3) * e(4, 2) * e(5, 2));
    let lhs_b = diff(6, s33, s22)?;
    let rhs_b = e(4, 6) * (-a3 + a1 * (&one - b3)) / (e(1, 5) * e(3, 6));
    let lhs_c = diff(1, s22, s12)?;
    let rhs_c = e(1, 3) * (b1 + (a1 - &one) * b3) / (e(6, 3) * e(4, 2));
    Ok([(lhs_a, rhs_a), (lhs_b, rhs_b), (lhs_c, rhs_c)])
}

type Outcome = std::result::Result<(), String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn module_err(e: crate::Error) -> String {
    format!("{}: {e}", e.kind())
}

pub struct Property {
    pub module: &'static str,
    pub name: &'static str,
    run: fn(&mut Rng) -> Outcome,
}

fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        if rng.below(3) == 0 {
            Scalar::zero()
        } else {
            rng.rational(-6, 6, 4)
        }
    })
}

fn scalar_round_trip(rng: &mut Rng) -> Outcome {
    let x = rng.rational(-1000, 1000, 1000);
    let text = format_scalar(&x);
    let back = parse_scalar(&text).map_err(|e| e.0)?;
    check(back == x, || {
        format!("{text} parsed as {}", format_scalar(&back))
    })
}

fn det3_oracle(rng: &mut Rng) -> Outcome {
    let m = random_matrix(rng, 3, 3);
    let fast = det3(&m).map_err(module_err)?;
    let slow = leibniz_det(&m);
    check(fast == slow, || {
        format!(
            "det3 {} but Leibniz {}",
            format_scalar(&fast),
            format_scalar(&slow)
        )
    })
}

fn rank_transpose(rng: &mut Rng) -> Outcome {
    let (r, c) = (1 + rng.below(6) as usize, 1 + rng.below(6) as usize);
    let m = random_matrix(rng, r, c);
    let (a, b) = (mat_rank(&m), mat_rank(&m.transpose()));
    check(a == b, || format!("{r}x{c}: rank {a} vs transpose {b}"))
}

fn solve_substitution(rng: &mut Rng) -> Outcome {
    let (r, c) = (1 + rng.below(5) as usize, 1 + rng.below(5) as usize);
    let a = random_matrix(rng, r, c);
    let x = random_matrix(rng, c, 1);
    let b = (&a * &x).column(0);
    let sol = solve_linear(&a, &b)
        .map_err(module_err)?
        .solution()
        .ok_or("consistent system reported inconsistent")?;
    let back = (&a * &Matrix::column_vector(sol)).column(0);
    check(back == b, || "solution does not satisfy the system".into())
}

fn v_oracle(rng: &mut Rng) -> Outcome {
    let psi = PsiVector::from_array(std::array::from_fn(|_| rng.rational(-5, 5, 6)));
    let v = build_v(&psi);
    let o = oracle_v(&psi);
    if let Some((r, c)) = (0..7)
        .flat_map(|r| (0..7).map(move |c| (r, c)))
        .find(|&(r, c)| v[(r, c)] != o[(r, c)])
    {
        return Err(format!(
            "entry ({}, {}) disagrees with the oracle",
            r + 1,
            c + 1
        ));
    }
    let zeros_ok = (1..=7)
        .all(|i| (1..=7).all(|j| !is_structural_zero(i, j) || v[(cyc(i), cyc(j))].is_zero()));
    check(zeros_ok, || "structural zero is nonzero".into())
}

fn reversal(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    let (rev, rows, cols) = reverse_psi(&psi);
    let back = rows.apply_left(&cols.apply_right(&build_v(&rev)));
    check(back == build_v(&psi), || {
        "permuted V(reversed) differs from V".into()
    })?;
    check(is_admissible(&rev), || {
        "reversed vector is not admissible".into()
    })?;
    check(reverse_psi(&rev).0 == psi, || {
        "reversal is not an involution".into()
    })
}

fn conjugation(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    let step = psi_step(&psi).map_err(module_err)?;
    let rebuilt = &(&step.q1.to_matrix() * &build_v(&step.next)) * &step.q2.to_matrix();
    check(rebuilt == build_v(&psi), || {
        "Q1 V(next) Q2 differs from V".into()
    })?;
    check(is_admissible(&step.next), || {
        "step left the admissible set".into()
    })
}

fn cyclicity(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    let p7 = psi_orbit(&psi, 7).map_err(module_err)?;
    check(p7 == psi, || {
        format!("orbit returns {p7:?} instead of {psi:?}")
    })
}

fn sign_identity_suite(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    for (name, (lhs, rhs)) in ["A", "B", "C"]
        .iter()
        .zip(sign_identities(&psi).map_err(module_err)?)
    {
        check(lhs == rhs, || {
            format!(
                "identity {name}: {} vs {}",
                format_scalar(&lhs),
                format_scalar(&rhs)
            )
        })?;
    }
    Ok(())
}

fn middle_min_nonnegative(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    // walk the orbit so the condition is met at least once per draw
    let mut p = psi;
    for t in 0..7 {
        if t > 0 {
            p = psi_step(&p).map_err(module_err)?.next;
        }
        if let Some((f, g)) = middle_min_factor(&p).map_err(module_err)? {
            check(middle_is_min(&p), || {
                "factor produced without the condition".into()
            })?;
            check(f.is_nonnegative() && g.is_nonnegative(), || {
                format!("negative entry at orbit step {t}")
            })?;
            check(&f * &g == build_v(&p), || {
                format!("F G differs from V at orbit step {t}")
            })?;
        }
    }
    Ok(())
}

fn search_bound(rng: &mut Rng) -> Outcome {
    let psi = random_admissible_psi(rng);
    let cert = factor_admissible_v(&psi).map_err(module_err)?;
    check(cert.certifies(&build_v(&psi)), || {
        "certificate does not reproduce V".into()
    })?;
    check(cert.search_len() <= 14, || {
        format!("search took {} terms", cert.search_len())
    })
}

fn heptagon_factor(rng: &mut Rng) -> Outcome {
    let s = polygon_slack(&random_heptagon(rng)).map_err(module_err)?.s;
    let mut rows: Vec<usize> = (0..7).collect();
    let mut cols: Vec<usize> = (0..7).collect();
    rng.shuffle(&mut rows);
    rng.shuffle(&mut cols);
    let scales: Vec<Scalar> = (0..7).map(|_| rng.rational(1, 9, 9)).collect();
    let m = MonomialMatrix::diagonal(scales)
        .map_err(module_err)?
        .apply_left(&s.select_rows(&rows).select_cols(&cols));
    let cert = factor_cyclic7(&m).map_err(module_err)?;
    check(cert.certifies(&m), || {
        "certificate does not reproduce the matrix".into()
    })
}

fn section_coefficients(rng: &mut Rng) -> Outcome {
    let n = 3 + rng.below(10) as usize;
    let with_vertices = rng.below(2) == 0;
    let a = random_rank3_7xn(rng, n, with_vertices).map_err(module_err)?;
    let poly = section_polygon(&a).map_err(module_err)?;
    let norm = normalize_columns(&a).map_err(module_err)?;
    for j in 0..norm.matrix.cols() {
        let col = norm.matrix.column(j);
        let w = convex_coefficients(&poly, &col).map_err(module_err)?;
        let sum: Scalar = w.iter().sum();
        check(sum.is_one() && !w.iter().any(Signed::is_negative), || {
            format!("column {j}: weights are not convex")
        })?;
    }
    let f = factor_7xn(&a).map_err(module_err)?;
    check(f.inner_dim() <= 6, || {
        format!("inner dimension {}", f.inner_dim())
    })?;
    check(f.left.is_nonnegative() && f.right.is_nonnegative(), || {
        "negative factor entry".into()
    })?;
    check(&f.left * &f.right == a, || {
        "product differs from the input".into()
    })
}

fn ngon_bound(rng: &mut Rng) -> Outcome {
    let n = 3 + rng.below(22) as usize;
    let s = polygon_slack(&random_ngon(rng, n)).map_err(module_err)?.s;
    let f = nn_factor(&s).map_err(module_err)?;
    let report = verify_nn_factorization(&s, &f);
    check(report.passed(), || {
        format!("{n}-gon: {}", report.to_string().trim_end())
    })?;
    check(f.inner_dim <= inner_dim_bound(n, n), || {
        format!("{n}-gon: inner dimension {}", f.inner_dim)
    })?;
    let t = nn_factor(&s.transpose()).map_err(module_err)?;
    check(verify_nn_factorization(&s.transpose(), &t).passed(), || {
        format!("{n}-gon transpose fails")
    })
}

fn low_rank(rng: &mut Rng) -> Outcome {
    let r = rng.below(3) as usize;
    let (m, n) = (2 + rng.below(8) as usize, 2 + rng.below(8) as usize);
    let a = random_rank_r(rng, m, n, r);
    let f = nn_factor(&a).map_err(module_err)?;
    check(verify_nn_factorization(&a, &f).passed(), || {
        "report fails".into()
    })?;
    check(f.inner_dim == r, || {
        format!("rank {r} gave inner dimension {}", f.inner_dim)
    })
}

fn extension(rng: &mut Rng) -> Outcome {
    let n = 3 + rng.below(22) as usize;
    let p = random_ngon(rng, n);
    let ef = build_extension(&p).map_err(module_err)?;
    let report = verify_extension(&p, &ef);
    check(report.passed(), || {
        format!("{n}-gon: {}", report.to_string().trim_end())
    })?;
    check(n < 7 || ef.k < n, || {
        format!("{n}-gon needs {} inequalities", ef.k)
    })
}

fn slack_pattern(rng: &mut Rng) -> Outcome {
    let n = 3 + rng.below(22) as usize;
    let cert = polygon_slack(&random_ngon(rng, n)).map_err(module_err)?;
    let s = &cert.s;
    let ok = (0..n).all(|i| {
        (0..n).all(|t| {
            (t == i || t == (i + 1) % n) == s[(i, t)].is_zero() && !s[(i, t)].is_negative()
        })
    });
    check(ok && cert.rank == 3, || {
        format!("{n}-gon slack pattern or rank is wrong")
    })
}

/// Every property, grouped by module.
pub fn properties() -> Vec<Property> {
    macro_rules! p {
        ($m:literal, $n:literal, $f:ident) => {
            Property {
                module: $m,
                name: $n,
                run: $f,
            }
        };
    }
    vec![
        p!("exactkernel", "scalar text round trip", scalar_round_trip),
        p!("exactkernel", "det3 matches the Leibniz sum", det3_oracle),
        p!("exactkernel", "rank is transpose invariant", rank_transpose),
        p!(
            "exactkernel",
            "solutions satisfy the system",
            solve_substitution
        ),
        p!("psicore", "V matches the Leibniz oracle", v_oracle),
        p!("psicore", "reversal relabels V", reversal),
        p!("psicore", "step conjugates V", conjugation),
        p!("psicore", "orbit has period 7", cyclicity),
        p!("psicore", "sign identities", sign_identity_suite),
        p!(
            "psicore",
            "middle-min factors are nonnegative",
            middle_min_nonnegative
        ),
        p!("psicore", "search ends within 14 terms", search_bound),
        p!("heptafactor", "relabeled heptagons factor", heptagon_factor),
        p!(
            "simplexsection",
            "columns are convex combinations",
            section_coefficients
        ),
        p!("rank3nmf", "polygon slack meets the bound", ngon_bound),
        p!("rank3nmf", "low rank is exact", low_rank),
        p!("polyext", "slack pattern and rank", slack_pattern),
        p!("polyext", "extensions verify", extension),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Iteration index and message of the first failure.
    pub first_failure: Option<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub iterations: usize,
    pub results: Vec<PropertyResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failed == 0)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let tag = if r.failed == 0 { "PASS" } else { "FAIL" };
            write!(
                f,
                "{tag} {}: {} ({}/{})",
                r.module,
                r.name,
                r.passed,
                r.passed + r.failed
            )?;
            if let Some((i, msg)) = &r.first_failure {
                write!(f, " first failure at iteration {i}: {msg}")?;
            }
            writeln!(f)?;
        }
        let bad = self.results.iter().filter(|r| r.failed > 0).count();
        writeln!(
            f,
            "seed {} iterations {}: {} properties passed, {bad} failed",
            self.seed,
            self.iterations,
            self.results.len() - bad
        )
    }
}

pub fn property_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn run_selftest(seed: u64, iterations: usize) -> SelftestReport {
    let results = properties()
        .par_iter()
        .enumerate()
        .map(|(idx, prop)| {
            let mut rng = Rng::new(property_seed(seed, idx));
            let (mut passed, mut failed, mut first_failure) = (0, 0, None);
            for it in 0..iterations {
                match (prop.run)(&mut rng) {
                    Ok(()) => passed += 1,
                    Err(msg) => {
                        failed += 1;
                        first_failure.get_or_insert((it, msg));
                    }
                }
            }
            PropertyResult {
                module: prop.module,
                name: prop.name,
                passed,
                failed,
                first_failure,
            }
        })
        .collect();
    SelftestReport {
        seed,
        iterations,
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::fixtures::h7_psi;

    #[test]
    fn leibniz_small_cases() {
        assert_eq!(leibniz_det(&Matrix::zeros(0, 0)), int(1));
        assert_eq!(leibniz_det(&Matrix::from_ints(&[[2, 1], [7, 4]])), int(1));
        let m = Matrix::from_ints(&[[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 3]]);
        assert_eq!(leibniz_det(&m), int(3));
    }

    #[test]
    fn identities_hold_at_the_fixture() {
        for (lhs, rhs) in sign_identities(&h7_psi()).unwrap() {
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn short_run_is_green_and_deterministic() {
        let a = run_selftest(3, 2);
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_string(), run_selftest(3, 2).to_string());
        assert_eq!(a.results.len(), properties().len());
    }
}
