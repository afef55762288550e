//! Dense complex matrices and vectors used throughout the crate.
//!
//! Everything is desk-scale (dimensions up to a couple hundred), stored
//! densely as `ndarray::Array2<Complex64>`. The `Matrix` newtype enforces
//! squareness and finite entries at construction; rectangular work arrays
//! inside factorizations use `Array2<Cx>` directly.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::LinalgError;

/// Complex scalar alias.
pub type Cx = Complex64;
/// Complex column vector.
pub type CVector = Array1<Cx>;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Array2<Cx>,
}

impl Matrix {
    /// Wrap a square array, rejecting non-square shapes and NaN/Inf entries.
    pub fn new(data: Array2<Cx>) -> Result<Self, LinalgError> {
        let (r, c) = data.dim();
        if r != c {
            return Err(LinalgError::NotSquare { rows: r, cols: c });
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Matrix { data })
    }

    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Matrix {
            data: Array2::zeros((n, n)),
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Matrix {
            data: Array2::from_diag_elem(n, Cx::new(1.0, 0.0)),
        }
    }

    /// `c * I` of dimension `n`.
    pub fn scaled_identity(n: usize, c: Cx) -> Self {
        Matrix {
            data: Array2::from_diag_elem(n, c),
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[Cx]) -> Self {
        let n = entries.len();
        let mut data = Array2::zeros((n, n));
        for (i, &e) in entries.iter().enumerate() {
            data[[i, i]] = e;
        }
        Matrix { data }
    }

    /// Build from a closure on (row, col).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cx) -> Self {
        Matrix {
            data: Array2::from_shape_fn((n, n), move |(i, j)| f(i, j)),
        }
    }

    /// Row-major construction from a flat slice of length `n*n`.
    pub fn from_rows(n: usize, entries: &[Cx]) -> Result<Self, LinalgError> {
        if entries.len() != n * n {
            return Err(LinalgError::DimMismatch {
                context: format!("from_rows: expected {} entries, got {}", n * n, entries.len()),
            });
        }
        let data = Array2::from_shape_vec((n, n), entries.to_vec())
            .expect("shape checked above");
        Matrix::new(data)
    }

    /// Row-major construction from real entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        let cx: Vec<Cx> = entries.iter().map(|&x| Cx::new(x, 0.0)).collect();
        Matrix::from_rows(n, &cx)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn array(&self) -> &Array2<Cx> {
        &self.data
    }

    pub fn into_array(self) -> Array2<Cx> {
        self.data
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        Matrix {
            data: self.data.dot(&rhs.data),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &CVector) -> CVector {
        self.data.dot(v)
    }

    /// `self * c`.
    pub fn scale(&self, c: Cx) -> Matrix {
        Matrix {
            data: self.data.mapv(|z| z * c),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix {
            data: self.data.t().mapv(|z| z.conj()),
        }
    }

    /// Integer matrix power by repeated multiplication.
    pub fn matpow(&self, k: usize) -> Matrix {
        let mut acc = Matrix::identity(self.dim());
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn trace(&self) -> Cx {
        self.data.diag().sum()
    }

    /// Maximum column sum of moduli.
    pub fn norm_1(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| self.data[[i, j]].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    ///
    /// Power iteration on A^H A with a Jacobi-SVD fallback when the
    /// iteration stalls; accurate to ~1e-12 relative in practice.
    pub fn norm_2(&self) -> f64 {
        op_norm_2(&self.data)
    }

    /// Frobenius distance to another matrix.
    pub fn fro_dist(&self, other: &Matrix) -> f64 {
        (&self.data - &other.data)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Solve `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if rhs.dim() != self.dim() {
            return Err(LinalgError::DimMismatch {
                context: format!("solve: lhs dim {}, rhs dim {}", self.dim(), rhs.dim()),
            });
        }
        lu_solve(&self.data, &rhs.data).map(|data| Matrix { data })
    }

    /// Solve `self * x = b` for a single vector.
    pub fn solve_vec(&self, b: &CVector) -> Result<CVector, LinalgError> {
        let rhs = Array2::from_shape_fn((b.len(), 1), |(i, _)| b[i]);
        let x = lu_solve(&self.data, &rhs)?;
        Ok(Array1::from_shape_fn(b.len(), |i| x[[i, 0]]))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Cx;
    fn index(&self, (i, j): (usize, usize)) -> &Cx {
        &self.data[[i, j]]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx {
        &mut self.data[[i, j]]
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            data: self.data.mapv(|z| -z),
        }
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product, conjugate-linear in the first argument.
pub fn vec_dot(x: &CVector, y: &CVector) -> Cx {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Spectral norm of a (possibly rectangular) array.
pub(crate) fn op_norm_2(a: &Array2<Cx>) -> f64 {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 || !fro.is_finite() {
        return fro;
    }
    // Work on A/fro so intermediates stay in range.
    let b = a.mapv(|z| z / fro);
    let bh = b.t().mapv(|z| z.conj());

    let mut best = 0.0f64;
    for seed in 0..2u32 {
        let mut v: CVector = Array1::from_shape_fn(n, |k| {
            let k = k as f64;
            match seed {
                0 => Cx::new(1.0 + 0.3 * (k + 1.0).sin(), 0.2 * (2.3 * k + 1.0).cos()),
                _ => Cx::new((1.7 * k + 0.4).cos(), 1.0 + 0.5 * (0.9 * k).sin()),
            }
        });
        let nv = vec_norm(&v);
        v.mapv_inplace(|z| z / nv);
        let mut sigma = 0.0f64;
        for _ in 0..1500 {
            let w = b.dot(&v);
            let s = vec_norm(&w);
            if s == 0.0 {
                break;
            }
            let z = bh.dot(&w);
            let nz = vec_norm(&z);
            if nz == 0.0 {
                sigma = s;
                break;
            }
            v = z.mapv(|t| t / nz);
            if (s - sigma).abs() <= 1e-14 * s.max(1e-300) {
                sigma = s;
                break;
            }
            sigma = s;
        }
        best = best.max(sigma);
    }
    if best == 0.0 {
        // Stalled start vectors (e.g. both in the kernel): fall back to SVD.
        let sv = super::svd::singular_values(&b);
        best = sv.first().copied().unwrap_or(0.0);
    }
    best * fro
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
pub(crate) fn lu_solve(a: &Array2<Cx>, b: &Array2<Cx>) -> Result<Array2<Cx>, LinalgError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "lu_solve: square lhs required");
    assert_eq!(n, b.nrows(), "lu_solve: rhs row mismatch");
    let m = b.ncols();

    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);

    for col in 0..n {
        let mut pmax = 0.0;
        let mut prow = col;
        for row in col..n {
            let v = lu[[row, col]].norm();
            if v > pmax {
                pmax = v;
                prow = row;
            }
        }
        if pmax <= f64::EPSILON * scale * (n as f64) {
            return Err(LinalgError::SingularSystem);
        }
        if prow != col {
            for j in 0..n {
                lu.swap([col, j], [prow, j]);
            }
            for j in 0..m {
                x.swap([col, j], [prow, j]);
            }
        }
        let pivot = lu[[col, col]];
        for row in (col + 1)..n {
            let factor = lu[[row, col]] / pivot;
            if factor == Cx::new(0.0, 0.0) {
                continue;
            }
            for j in (col + 1)..n {
                let v = lu[[col, j]];
                lu[[row, j]] -= factor * v;
            }
            for j in 0..m {
                let v = x[[col, j]];
                x[[row, j]] -= factor * v;
            }
        }
    }
    for col in (0..n).rev() {
        let pivot = lu[[col, col]];
        for j in 0..m {
            let mut sum = x[[col, j]];
            for k in (col + 1)..n {
                sum -= lu[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let rect = Array2::<Cx>::zeros((2, 3));
        assert!(matches!(
            Matrix::new(rect),
            Err(LinalgError::NotSquare { .. })
        ));
        let mut bad = Array2::<Cx>::zeros((2, 2));
        bad[[0, 1]] = cx(f64::NAN, 0.0);
        assert!(matches!(Matrix::new(bad), Err(LinalgError::NonFinite)));
    }

    #[test]
    fn norms_on_known_matrices() {
        let a = Matrix::from_real_rows(2, &[3.0, 0.0, 0.0, -4.0]).unwrap();
        assert!((a.norm_1() - 4.0).abs() < 1e-15);
        assert!((a.norm_fro() - 5.0).abs() < 1e-15);
        assert!((a.norm_2() - 4.0).abs() < 1e-12);
        // Rank-one uv^H has spectral norm |u||v|.
        let b = Matrix::from_real_rows(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!((b.norm_2() - 5.0).abs() < 1e-11);
    }

    #[test]
    fn lu_solves_complex_system() {
        let a = Matrix::from_rows(
            2,
            &[cx(1.0, 1.0), cx(2.0, 0.0), cx(0.0, -1.0), cx(3.0, 2.0)],
        )
        .unwrap();
        let x_true = Matrix::from_rows(2, &[cx(1.0, -2.0), cx(0.5, 0.0), cx(2.0, 1.0), cx(-1.0, 3.0)])
            .unwrap();
        let b = a.matmul(&x_true);
        let x = a.solve(&b).unwrap();
        assert!(x.fro_dist(&x_true) < 1e-13 * x_true.norm_fro());
    }

    #[test]
    fn singular_solve_is_rejected() {
        let a = Matrix::from_real_rows(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let b = Matrix::identity(2);
        assert!(matches!(a.solve(&b), Err(LinalgError::SingularSystem)));
    }

    #[test]
    fn matpow_matches_repeated_product() {
        let j = Matrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(j.matpow(0), Matrix::identity(2));
        assert_eq!(j.matpow(2), Matrix::zeros(2));
    }
}
