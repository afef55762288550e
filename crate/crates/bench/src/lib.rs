//! Benchmark-only crate; see `benches/kernels.rs`.
//!
//! Shared helpers for building deterministic benchmark inputs.

use semispec_core::linalg::{Cx, Matrix};

/// Deterministic dense complex matrix with entries of modulus about one.
pub fn bench_matrix(n: usize, seed: u64) -> Matrix {
    Matrix::from_fn(n, |i, j| {
        let t = (i * 31 + j * 17) as f64 + seed as f64 * 0.77;
        Cx::new((1.3 * t).sin(), (0.9 * t + 0.4).cos())
    })
}
