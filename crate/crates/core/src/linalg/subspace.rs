//! Subspaces of C^n as orthonormal bases with explicit rank tolerances.
//!
//! Carriers for kernels, ranges, hyper-ranges and the analytic/algebraic
//! cores. All rank decisions are relative singular-value cuts; containment
//! tests are residuals after orthogonal projection.

use ndarray::{Array1, Array2};

use super::matrix::{vec_norm, CVector, Cx, Matrix};
use super::svd::svd;
use super::LinalgError;

/// Default relative rank tolerance for subspace construction and solves.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Orthonormal basis of a subspace of C^n.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Array2<Cx>,
    rank_tol: f64,
}

impl Subspace {
    /// Orthonormalize the given columns (rank-revealing SVD) into a subspace.
    pub fn from_columns(cols: &Array2<Cx>, rank_tol: f64) -> Result<Self, LinalgError> {
        let (n, _k) = cols.dim();
        let f = svd(cols)?;
        let r = f.rank(rank_tol);
        let basis = f.u.slice(ndarray::s![.., ..r]).to_owned();
        Ok(Subspace {
            ambient_dim: n,
            basis,
            rank_tol,
        })
    }

    /// The zero subspace.
    pub fn zero(ambient_dim: usize, rank_tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: Array2::zeros((ambient_dim, 0)),
            rank_tol,
        }
    }

    /// All of C^n.
    pub fn full(ambient_dim: usize, rank_tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: Array2::from_diag_elem(ambient_dim, Cx::new(1.0, 0.0)),
            rank_tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the subspace itself.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Array2<Cx> {
        &self.basis
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        let bh = self.basis.t().mapv(|z| z.conj());
        self.basis.dot(&bh.dot(v))
    }

    /// Norm of the component of `v` outside the subspace.
    pub fn residual(&self, v: &CVector) -> f64 {
        vec_norm(&(v - &self.project(v)))
    }

    /// Whether `v` lies in the subspace up to `tol * ||v||`.
    pub fn contains_vec(&self, v: &CVector, tol: f64) -> bool {
        self.residual(v) <= tol * vec_norm(v).max(1e-300)
    }

    /// Whether `other` is contained in `self`: every basis vector of
    /// `other` must have projection residual at most `tol`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> Result<bool, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimMismatch {
                context: format!(
                    "subspace containment: ambient {} vs {}",
                    self.ambient_dim, other.ambient_dim
                ),
            });
        }
        for j in 0..other.dim() {
            let v: CVector = Array1::from_shape_fn(self.ambient_dim, |i| other.basis[[i, j]]);
            if self.residual(&v) > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim, self.rank_tol);
        }
        let bh = self.basis.t().mapv(|z| z.conj());
        // Kernel of B^H: right singular vectors past the rank.
        let f = svd(&bh).expect("svd of orthonormal adjoint");
        let r = f.rank(0.5); // singular values are 1 or 0
        let comp = f.v.slice(ndarray::s![.., r..]).to_owned();
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: comp,
            rank_tol: self.rank_tol,
        }
    }

    /// Intersection via the stacked orthogonal complements: U ∩ V is the
    /// complement of span(U^⊥ ∪ V^⊥).
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimMismatch {
                context: format!(
                    "subspace intersection: ambient {} vs {}",
                    self.ambient_dim, other.ambient_dim
                ),
            });
        }
        let tol = self.rank_tol.max(other.rank_tol);
        let uc = self.complement();
        let vc = other.complement();
        let k = uc.dim() + vc.dim();
        let mut stacked = Array2::<Cx>::zeros((self.ambient_dim, k));
        for j in 0..uc.dim() {
            for i in 0..self.ambient_dim {
                stacked[[i, j]] = uc.basis[[i, j]];
            }
        }
        for j in 0..vc.dim() {
            for i in 0..self.ambient_dim {
                stacked[[i, uc.dim() + j]] = vc.basis[[i, j]];
            }
        }
        let span = Subspace::from_columns(&stacked, tol)?;
        Ok(span.complement())
    }

    /// Smallest subspace containing all of the given ones.
    pub fn span_union(parts: &[&Subspace], rank_tol: f64) -> Result<Subspace, LinalgError> {
        let ambient = parts
            .first()
            .map(|s| s.ambient_dim)
            .expect("span_union of at least one subspace");
        let total: usize = parts.iter().map(|s| s.dim()).sum();
        let mut stacked = Array2::<Cx>::zeros((ambient, total));
        let mut col = 0;
        for s in parts {
            assert_eq!(s.ambient_dim, ambient, "span_union: ambient mismatch");
            for j in 0..s.dim() {
                for i in 0..ambient {
                    stacked[[i, col]] = s.basis[[i, j]];
                }
                col += 1;
            }
        }
        Subspace::from_columns(&stacked, rank_tol)
    }
}

/// Right null space of a matrix.
pub fn kernel(a: &Matrix, rank_tol: f64) -> Result<Subspace, LinalgError> {
    kernel_with_floor(a, rank_tol, 0.0)
}

/// Right null space with an absolute singular-value floor. Needed when
/// the matrix is a high power of an operator: a power that vanishes in
/// exact arithmetic still carries eps-level noise whose largest singular
/// value would otherwise anchor the relative cut.
pub fn kernel_with_floor(
    a: &Matrix,
    rank_tol: f64,
    sigma_floor: f64,
) -> Result<Subspace, LinalgError> {
    let f = svd(a.array())?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let cut = (rank_tol * smax).max(sigma_floor);
    let r = f.sigma.iter().filter(|&&s| s > cut).count();
    let n = a.dim();
    let basis = f.v.slice(ndarray::s![.., r..]).to_owned();
    Ok(Subspace {
        ambient_dim: n,
        basis,
        rank_tol,
    })
}

/// Column space of a matrix.
pub fn range(a: &Matrix, rank_tol: f64) -> Result<Subspace, LinalgError> {
    Subspace::from_columns(a.array(), rank_tol)
}

/// Orthonormal basis of col(A^p), computed by repeated multiply-and-
/// reorthonormalize so rank decisions happen on well-scaled bases.
/// Once the dimension stops shrinking the range is stationary and the
/// iteration stops early.
///
/// Rank cuts combine the relative test inside each product with an
/// absolute floor at the operator's own scale, `rank_tol * ||A||`:
/// a unit vector mapped below that floor counts as annihilated. Without
/// the floor a single surviving direction can never be judged zero
/// relative to itself, and nilpotent operators carrying eps-level noise
/// would report a spurious one-dimensional hyper-range.
pub fn range_of_power(a: &Matrix, p: usize, rank_tol: f64) -> Result<Subspace, LinalgError> {
    range_of_power_with_floor(a, p, rank_tol, rank_tol * a.norm_2())
}

/// [`range_of_power`] with a caller-supplied singular-value floor, for
/// operators that are themselves differences of larger quantities (their
/// own norm then underestimates the noise scale).
pub fn range_of_power_with_floor(
    a: &Matrix,
    p: usize,
    rank_tol: f64,
    sigma_floor: f64,
) -> Result<Subspace, LinalgError> {
    let n = a.dim();
    if p == 0 {
        return Ok(Subspace::full(n, rank_tol));
    }
    let mut current = range_with_floor(a.array(), rank_tol, sigma_floor)?;
    for _ in 1..p {
        if current.is_zero() {
            break;
        }
        let prev_dim = current.dim();
        let mapped = a.array().dot(current.basis());
        let next = range_with_floor(&mapped, rank_tol, sigma_floor)?;
        if next.dim() == prev_dim {
            return Ok(current);
        }
        current = next;
    }
    Ok(current)
}

fn range_with_floor(
    cols: &Array2<Cx>,
    rank_tol: f64,
    sigma_floor: f64,
) -> Result<Subspace, LinalgError> {
    let (n, _) = cols.dim();
    let f = svd(cols)?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let cut = (rank_tol * smax).max(sigma_floor);
    let r = f.sigma.iter().filter(|&&s| s > cut).count();
    let basis = f.u.slice(ndarray::s![.., ..r]).to_owned();
    Ok(Subspace {
        ambient_dim: n,
        basis,
        rank_tol,
    })
}

/// Stabilized hyper-range: intersection of col(A^p) over all powers,
/// which stabilizes after at most `dim` steps.
pub fn hyper_range(a: &Matrix, rank_tol: f64) -> Result<Subspace, LinalgError> {
    range_of_power(a, a.dim().max(1), rank_tol)
}

/// [`hyper_range`] with a caller-supplied singular-value floor.
pub fn hyper_range_with_floor(
    a: &Matrix,
    rank_tol: f64,
    sigma_floor: f64,
) -> Result<Subspace, LinalgError> {
    range_of_power_with_floor(a, a.dim().max(1), rank_tol, sigma_floor)
}
