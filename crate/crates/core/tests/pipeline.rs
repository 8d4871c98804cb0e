use nnrank::exact::{int, mat_rank, Matrix};
use nnrank::fixtures::{h7_points, h7_psi};
use nnrank::gen::{random_ngon, random_rank3_7xn, Rng};
use nnrank::hepta::{factor_cyclic7, reduce_to_psi};
use nnrank::nmf::{inner_dim_bound, Axis, Method};
use nnrank::polygon::polygon_slack;
use nnrank::psi::build_v;
use nnrank::section::factor_7xn;
use nnrank::{
    build_extension, nn_factor, polygon_from_points, verify_extension, verify_nn_factorization,
    Error,
};

#[test]
fn fixture_heptagon_end_to_end() {
    let p = polygon_from_points(&h7_points()).unwrap();
    let s = polygon_slack(&p).unwrap().s;
    let red = reduce_to_psi(&s).unwrap();
    assert_eq!(red.psi, h7_psi());
    assert_eq!(red.scaled(&s), red.target());
    assert_eq!(red.target(), build_v(&h7_psi()).scale_cols(&red.c));

    let cert = factor_cyclic7(&s).unwrap();
    assert!(cert.certifies(&s));

    let f = nn_factor(&s).unwrap();
    assert_eq!(f.inner_dim, 6);
    assert!(matches!(f.trace[0].method, Method::Heptagon { .. }));
    assert!(verify_nn_factorization(&s, &f).passed());

    let ef = build_extension(&p).unwrap();
    assert_eq!(ef.k, 6);
    assert!(verify_extension(&p, &ef).passed());
}

#[test]
fn wide_seven_row_matrices() {
    let mut rng = Rng::new(11);
    for with_vertices in [true, false, true, false] {
        let a = random_rank3_7xn(&mut rng, 20, with_vertices).unwrap();
        let block = factor_7xn(&a).unwrap();
        assert!(block.inner_dim() <= 6);
        assert_eq!(&block.left * &block.right, a);
        if with_vertices {
            assert!(matches!(block.method, Method::Heptagon { .. }));
        }
        let f = nn_factor(&a).unwrap();
        assert!(verify_nn_factorization(&a, &f).passed());
    }
}

#[test]
fn zero_lines_and_orientation_round_trip() {
    let s = polygon_slack(&random_ngon(&mut Rng::new(4), 9)).unwrap().s;
    let rows: Vec<usize> = (0..10).filter(|&i| i != 3).collect();
    let cols: Vec<usize> = (0..9).collect();
    let a = s.spread_rows(&rows, 10).spread_cols(&cols, 10);
    assert_eq!(a.shape(), (10, 10));

    let f = nn_factor(&a).unwrap();
    assert!(verify_nn_factorization(&a, &f).passed());
    assert!(f.inner_dim <= inner_dim_bound(9, 9));
    assert!((0..f.inner_dim).all(|k| f.left[(3, k)] == int(0)));

    let tall = s.select_rows(&(0..8).collect::<Vec<_>>()).transpose();
    assert_eq!(tall.shape(), (9, 8));
    let f = nn_factor(&tall).unwrap();
    assert!(f.trace.iter().all(|t| t.axis == Axis::Cols));
    assert!(f.inner_dim <= 7);
    assert!(verify_nn_factorization(&tall, &f).passed());
}

#[test]
fn polygon_sweep_meets_the_bound() {
    let mut rng = Rng::new(21);
    for n in [3, 4, 5, 6, 7, 8, 10, 14, 21, 30] {
        let p = random_ngon(&mut rng, n);
        let s = polygon_slack(&p).unwrap().s;
        assert_eq!(mat_rank(&s), 3);
        let f = nn_factor(&s).unwrap();
        assert!(f.inner_dim <= inner_dim_bound(n, n), "{n}-gon");
        assert!(verify_nn_factorization(&s, &f).passed());
        let ef = build_extension(&p).unwrap();
        assert!(verify_extension(&p, &ef).passed());
        if n >= 7 {
            assert!(ef.k < n);
        }
    }
}

#[test]
fn errors_carry_stable_kinds() {
    let e = nn_factor(&Matrix::from_ints(&[[1, -1]])).unwrap_err();
    assert_eq!(e.kind(), "NotNonnegative");
    // shifting every facet offset keeps the rank at 3 but leaves no zeros
    let s = polygon_slack(&polygon_from_points(&h7_points()).unwrap())
        .unwrap()
        .s;
    let shifted = Matrix::from_fn(7, 7, |i, j| &s[(i, j)] + int(1));
    assert_eq!(mat_rank(&shifted), 3);
    let e = factor_cyclic7(&shifted).unwrap_err();
    assert_eq!(e.kind(), "PatternError");
    let e = nn_factor(&Matrix::identity(5)).unwrap_err();
    assert!(matches!(e, Error::Rank { found: 5, .. }));
    assert_eq!(e.kind(), "RankError");
}
