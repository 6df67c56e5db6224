//! Benchmark fixtures shared by the criterion targets.

use polaron_core::{BathModel, DensityMatrixST, TimeGrid};

pub fn model() -> BathModel {
    BathModel::new(1.0, 10.0).expect("valid bath")
}

pub fn grid(t_max: f64) -> TimeGrid {
    TimeGrid::new(t_max, 0.01).expect("valid grid")
}

pub fn initial() -> DensityMatrixST {
    DensityMatrixST::pure(
        polaron_core::Complex64::new((2.0f64 / 3.0).sqrt(), 0.0),
        polaron_core::Complex64::new((1.0f64 / 3.0).sqrt(), 0.0),
    )
    .expect("valid state")
}
