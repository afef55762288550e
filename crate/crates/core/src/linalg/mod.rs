//! Self-contained dense complex linear algebra kernel: eigendecomposition
//! with clustering, matrix exponential, minimal-norm solves, and subspace
//! arithmetic with explicit tolerances.

pub mod eig;
pub mod expm;
pub mod matrix;
pub mod schur;
pub mod subspace;
pub mod svd;

pub use eig::{eig_decompose, eig_decompose_named, eigenvalues, spectral_abscissa,
    SpectralCluster, SpectralDecomposition, DEFAULT_CLUSTER_TOL};
pub use expm::expm;
pub use matrix::{vec_dot, vec_norm, CVector, Cx, Matrix};
pub use subspace::{hyper_range, hyper_range_with_floor, kernel, kernel_with_floor, range,
    range_of_power, range_of_power_with_floor, Subspace, DEFAULT_RANK_TOL};
pub use svd::{min_norm_solve, singular_values, svd, MinNormSolution, Svd};

/// Errors from the linear-algebra kernel.
#[derive(Debug, Clone, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("dimension mismatch: {context}")]
    DimMismatch { context: String },
    #[error("eigenvalue iteration did not converge for {context}")]
    EigNonConvergence { context: String },
    #[error("one-sided Jacobi SVD did not converge")]
    SvdNonConvergence,
    #[error("linear system is singular to working precision")]
    SingularSystem,
    #[error("{context}")]
    Overflow { context: String },
    #[error("eigenvalue clusters are numerically inseparable")]
    ClusterSeparation,
}
