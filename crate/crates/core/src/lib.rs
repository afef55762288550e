//! Desk-scale numerical laboratory for matrix-represented C0 semigroups.
//!
//! Builds the Cauchy-problem operators that tie a generator `A` to its
//! semigroup `T(t) = exp(tA)`, computes local spectra, resolvent chains,
//! analytic/algebraic cores and core spectra, and turns the corresponding
//! operator identities, inclusions, and stability criteria into executable
//! residual checks on a reproducible corpus of example generators.

pub mod cauchy;
pub mod io;
pub mod linalg;
pub mod local_spectral;
pub mod report;
pub mod semigroup;
pub mod stability;
pub mod zoo;

pub use linalg::{CVector, Cx, Matrix, SpectralDecomposition, Subspace};
pub use semigroup::{GeneratorSpec, GrowthBound};
