//! Fixed inputs for the benchmarks.

use nnrank::exact::Matrix;
use nnrank::fixtures::h7_points;
use nnrank::gen::{random_ngon, Rng};
use nnrank::polygon::polygon_slack;
use nnrank::polygon_from_points;

pub fn h7_slack() -> Matrix {
    polygon_slack(&polygon_from_points(&h7_points()).unwrap())
        .unwrap()
        .s
}

pub fn ngon_slack(n: usize, seed: u64) -> Matrix {
    polygon_slack(&random_ngon(&mut Rng::new(seed), n))
        .unwrap()
        .s
}
