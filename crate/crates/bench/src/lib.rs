//! Shared fixtures for the benchmarks.

use covnoise::matrices::{chessboard, ChessboardParams, Orientation};
use covnoise::nalgebra::DMatrix;
use covnoise::{Complex64, IndexDomain, StructureMatrix};

pub fn chessboard_z(xi: f64) -> StructureMatrix {
    chessboard(IndexDomain::Integers, ChessboardParams::new(xi, Orientation::OneOnEvenSum).unwrap()).unwrap()
}

/// Deterministic dense Hermitian test matrix with a dominant eigenvalue.
pub fn hermitian(size: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(size, size, |i, j| {
        let (a, b) = (i.min(j) as f64, i.max(j) as f64);
        let re = 1.0 / (1.0 + (b - a));
        let im = if i == j { 0.0 } else { ((a * 7.0 + b * 3.0).sin() * 0.1).copysign(j as f64 - i as f64) };
        Complex64::new(re, im)
    })
}
