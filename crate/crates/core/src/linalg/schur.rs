//! Complex Schur decomposition `A = Q T Q^H` with eigenvalue reordering.
//!
//! Householder reduction to Hessenberg form followed by explicitly shifted
//! QR with Wilkinson shifts and exceptional-shift restarts. Reordering uses
//! unitary swaps of adjacent diagonal entries, which is what the spectral
//! projector construction needs: move a cluster to the top, solve one
//! triangular Sylvester equation, and read off the Riesz projector.

use ndarray::Array2;

use super::matrix::Cx;
use super::LinalgError;

/// Unitary `q` and upper-triangular `t` with `a = q t q^H`.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: Array2<Cx>,
    pub t: Array2<Cx>,
}

impl Schur {
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<Cx> {
        (0..self.dim()).map(|i| self.t[[i, i]]).collect()
    }
}

/// Compute the Schur form. `context` names the matrix in diagnostics.
pub fn schur(a: &Array2<Cx>, context: &str) -> Result<Schur, LinalgError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "schur: square input required");
    let mut h = a.clone();
    let mut q = Array2::from_diag_elem(n, Cx::new(1.0, 0.0));
    if n <= 1 {
        return Ok(Schur { q, t: h });
    }

    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q, context)?;

    // Clean the strict lower triangle.
    for i in 0..n {
        for j in 0..i {
            h[[i, j]] = Cx::new(0.0, 0.0);
        }
    }
    Ok(Schur { q, t: h })
}

/// Householder reduction to upper Hessenberg, accumulating Q.
fn hessenberg(h: &mut Array2<Cx>, q: &mut Array2<Cx>) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        // Reflector zeroing h[k+2.., k].
        let mut xnorm_sqr = 0.0;
        for i in (k + 1)..n {
            xnorm_sqr += h[[i, k]].norm_sqr();
        }
        let xnorm = xnorm_sqr.sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() == 0.0 {
            Cx::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        // v = x - alpha e1; |v0| = |x0| + xnorm, no cancellation.
        let mut v: Vec<Cx> = (k + 1..n).map(|i| h[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // H <- P H, rows k+1.., all columns from k.
        for j in k..n {
            let mut dot = Cx::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[[k + 1 + off, j]];
            }
            let f = dot * beta;
            for (off, vi) in v.iter().enumerate() {
                let val = *vi * f;
                h[[k + 1 + off, j]] -= val;
            }
        }
        // H <- H P, columns k+1.., all rows.
        for i in 0..n {
            let mut dot = Cx::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                dot += h[[i, k + 1 + off]] * *vi;
            }
            let f = dot * beta;
            for (off, vi) in v.iter().enumerate() {
                let val = f * vi.conj();
                h[[i, k + 1 + off]] -= val;
            }
        }
        // Q <- Q P.
        for i in 0..n {
            let mut dot = Cx::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                dot += q[[i, k + 1 + off]] * *vi;
            }
            let f = dot * beta;
            for (off, vi) in v.iter().enumerate() {
                let val = f * vi.conj();
                q[[i, k + 1 + off]] -= val;
            }
        }
        h[[k + 1, k]] = alpha;
        for i in (k + 2)..n {
            h[[i, k]] = Cx::new(0.0, 0.0);
        }
    }
}

/// Shifted QR iteration driving a Hessenberg matrix to triangular form.
fn qr_iterate(h: &mut Array2<Cx>, q: &mut Array2<Cx>, context: &str) -> Result<(), LinalgError> {
    let n = h.nrows();
    let hnorm = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let mut block_iters = 0usize;
    let max_iters = 60 * n;

    loop {
        // Deflate negligible subdiagonals at the active corner.
        while hi > 0 {
            let s = h[[hi - 1, hi - 1]].norm() + h[[hi, hi]].norm();
            let tol = if s > 0.0 { eps * s } else { eps * hnorm };
            if h[[hi, hi - 1]].norm() <= tol {
                h[[hi, hi - 1]] = Cx::new(0.0, 0.0);
                hi -= 1;
                block_iters = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            return Ok(());
        }
        // Active block is lo..=hi.
        let mut lo = hi;
        while lo > 0 {
            let s = h[[lo - 1, lo - 1]].norm() + h[[lo, lo]].norm();
            let tol = if s > 0.0 { eps * s } else { eps * hnorm };
            if h[[lo, lo - 1]].norm() <= tol {
                h[[lo, lo - 1]] = Cx::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        total_iters += 1;
        block_iters += 1;
        if total_iters > max_iters {
            return Err(LinalgError::EigNonConvergence {
                context: context.to_string(),
            });
        }

        let mu = if block_iters % 12 == 0 {
            // Exceptional shift to break cycles.
            h[[hi, hi]] + h[[hi, hi - 1]].norm() * Cx::new(0.75, 0.2887)
        } else {
            wilkinson_shift(h, hi)
        };

        qr_step(h, q, lo, hi, mu);
    }
}

/// Eigenvalue of the trailing 2x2 closest to the corner entry.
fn wilkinson_shift(h: &Array2<Cx>, hi: usize) -> Cx {
    let a = h[[hi - 1, hi - 1]];
    let b = h[[hi - 1, hi]];
    let c = h[[hi, hi - 1]];
    let d = h[[hi, hi]];
    let half = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    let l1 = half + disc;
    let l2 = half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit single-shift QR step on rows/columns lo..=hi.
fn qr_step(h: &mut Array2<Cx>, q: &mut Array2<Cx>, lo: usize, hi: usize, mu: Cx) {
    let n = h.nrows();
    for i in lo..=hi {
        h[[i, i]] -= mu;
    }
    // Left rotations: G_i acts on rows (i, i+1), zeroing h[i+1, i].
    let mut rots: Vec<(Cx, Cx)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let f = h[[i, i]];
        let g = h[[i + 1, i]];
        let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
        let (u, v) = if r == 0.0 {
            (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0))
        } else {
            (f / r, g / r)
        };
        // G = [[conj(u), conj(v)], [-v, u]] sends (f, g) to (r, 0).
        for j in i..n {
            let hi_j = h[[i, j]];
            let hi1_j = h[[i + 1, j]];
            h[[i, j]] = u.conj() * hi_j + v.conj() * hi1_j;
            h[[i + 1, j]] = -v * hi_j + u * hi1_j;
        }
        rots.push((u, v));
    }
    // Right rotations G_i^H on columns (i, i+1), restoring Hessenberg.
    for (idx, &(u, v)) in rots.iter().enumerate() {
        let i = lo + idx;
        let top = (i + 2).min(hi + 1);
        for row in 0..top {
            let a = h[[row, i]];
            let b = h[[row, i + 1]];
            h[[row, i]] = a * u + b * v;
            h[[row, i + 1]] = -a * v.conj() + b * u.conj();
        }
        for row in 0..n {
            let a = q[[row, i]];
            let b = q[[row, i + 1]];
            q[[row, i]] = a * u + b * v;
            q[[row, i + 1]] = -a * v.conj() + b * u.conj();
        }
    }
    for i in lo..=hi {
        h[[i, i]] += mu;
    }
}

/// Swap the diagonal entries at positions (k, k+1) by a unitary similarity,
/// keeping T upper triangular and updating Q.
pub fn swap_adjacent(t: &mut Array2<Cx>, q: &mut Array2<Cx>, k: usize) {
    let n = t.nrows();
    let a = t[[k, k]];
    let b = t[[k, k + 1]];
    let c = t[[k + 1, k + 1]];
    // Eigenvector of [[a, b], [0, c]] for eigenvalue c.
    let w0 = b;
    let w1 = c - a;
    let r = (w0.norm_sqr() + w1.norm_sqr()).sqrt();
    if r == 0.0 {
        return; // a == c and b == 0: nothing to move.
    }
    let g00 = w0 / r;
    let g10 = w1 / r;
    // G = [[g00, -conj(g10)], [g10, conj(g00)]], first column the eigenvector.
    let g01 = -g10.conj();
    let g11 = g00.conj();

    // T <- G^H T on rows (k, k+1).
    for j in k..n {
        let x = t[[k, j]];
        let y = t[[k + 1, j]];
        t[[k, j]] = g00.conj() * x + g10.conj() * y;
        t[[k + 1, j]] = g01.conj() * x + g11.conj() * y;
    }
    // T <- T G on columns (k, k+1).
    for i in 0..=(k + 1) {
        let x = t[[i, k]];
        let y = t[[i, k + 1]];
        t[[i, k]] = x * g00 + y * g10;
        t[[i, k + 1]] = x * g01 + y * g11;
    }
    t[[k + 1, k]] = Cx::new(0.0, 0.0);
    // Q <- Q G.
    for i in 0..n {
        let x = q[[i, k]];
        let y = q[[i, k + 1]];
        q[[i, k]] = x * g00 + y * g10;
        q[[i, k + 1]] = x * g01 + y * g11;
    }
}

/// Reorder the Schur form so the selected diagonal positions occupy the
/// leading block, preserving relative order of both groups.
pub fn reorder_selected_to_top(t: &mut Array2<Cx>, q: &mut Array2<Cx>, select: &[bool]) {
    let n = t.nrows();
    assert_eq!(select.len(), n);
    let mut sel: Vec<bool> = select.to_vec();
    let mut target = 0usize;
    for i in 0..n {
        if sel[i] {
            let mut pos = i;
            while pos > target {
                swap_adjacent(t, q, pos - 1);
                sel.swap(pos - 1, pos);
                pos -= 1;
            }
            target += 1;
        }
    }
}

/// Solve `T11 Y - Y T22 = T12` with both blocks upper triangular.
///
/// Fails when the spectra of the blocks touch; callers treat that as a
/// signal to merge eigenvalue clusters.
pub fn sylvester_triangular(
    t11: &Array2<Cx>,
    t22: &Array2<Cx>,
    t12: &Array2<Cx>,
) -> Result<Array2<Cx>, LinalgError> {
    let k = t11.nrows();
    let m = t22.nrows();
    let mut y = Array2::<Cx>::zeros((k, m));
    for j in 0..m {
        // rhs = T12[:, j] + sum_{i<j} Y[:, i] T22[i, j]
        let mut rhs: Vec<Cx> = (0..k).map(|r| t12[[r, j]]).collect();
        for i in 0..j {
            let w = t22[[i, j]];
            if w != Cx::new(0.0, 0.0) {
                for (r, item) in rhs.iter_mut().enumerate() {
                    *item += y[[r, i]] * w;
                }
            }
        }
        // (T11 - t22[j,j] I) y_j = rhs, upper-triangular backsolve.
        let shift = t22[[j, j]];
        for r in (0..k).rev() {
            let mut sum = rhs[r];
            for c in (r + 1)..k {
                sum -= t11[[r, c]] * y[[c, j]];
            }
            let d = t11[[r, r]] - shift;
            if d.norm() < 1e-290 {
                return Err(LinalgError::ClusterSeparation);
            }
            let val = sum / d;
            if !val.re.is_finite() || !val.im.is_finite() {
                return Err(LinalgError::ClusterSeparation);
            }
            y[[r, j]] = val;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn fro(a: &Array2<Cx>) -> f64 {
        a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_schur(a: &Array2<Cx>, s: &Schur, tol: f64) {
        let n = a.nrows();
        let qh = s.q.t().mapv(|z| z.conj());
        let recon = s.q.dot(&s.t).dot(&qh);
        assert!(
            fro(&(&recon - a)) <= tol * fro(a).max(1.0),
            "reconstruction error {}",
            fro(&(&recon - a))
        );
        let qhq = qh.dot(&s.q);
        let eye = Array2::from_diag_elem(n, cx(1.0, 0.0));
        assert!(fro(&(&qhq - &eye)) <= tol * n as f64);
        for i in 0..n {
            for j in 0..i {
                assert_eq!(s.t[[i, j]], cx(0.0, 0.0));
            }
        }
    }

    fn pseudo_random(n: usize, seed: u64) -> Array2<Cx> {
        Array2::from_shape_fn((n, n), |(i, j)| {
            let t = (i * 37 + j * 23) as f64 + seed as f64 * 0.61;
            cx((2.3 * t).sin(), (1.7 * t + 0.5).cos())
        })
    }

    #[test]
    fn schur_of_random_matrices() {
        for (n, seed) in [(3, 1), (6, 2), (8, 3), (12, 4)] {
            let a = pseudo_random(n, seed);
            let s = schur(&a, "random").unwrap();
            check_schur(&a, &s, 1e-12);
        }
    }

    #[test]
    fn schur_of_real_rotation_finds_conjugate_pair() {
        let a = array![[cx(0.0, 0.0), cx(-1.0, 0.0)], [cx(1.0, 0.0), cx(0.0, 0.0)]];
        let s = schur(&a, "rotation").unwrap();
        check_schur(&a, &s, 1e-13);
        let mut eigs = s.eigenvalues();
        eigs.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((eigs[0] - cx(0.0, -1.0)).norm() < 1e-13);
        assert!((eigs[1] - cx(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn schur_of_triangular_and_nilpotent_inputs() {
        let j2 = array![[cx(0.0, 0.0), cx(1.0, 0.0)], [cx(0.0, 0.0), cx(0.0, 0.0)]];
        let s = schur(&j2, "jordan").unwrap();
        check_schur(&j2, &s, 1e-14);
        assert!(s.eigenvalues().iter().all(|l| l.norm() < 1e-14));

        let n = 5;
        let shift = Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j + 1 {
                cx(1.0, 0.0)
            } else {
                cx(0.0, 0.0)
            }
        });
        let s = schur(&shift, "nilpotent shift").unwrap();
        check_schur(&shift, &s, 1e-12);
        assert!(s.eigenvalues().iter().all(|l| l.norm() < 1e-10));
    }

    #[test]
    fn reorder_moves_selected_eigenvalue_to_top() {
        let a = pseudo_random(6, 9);
        let s = schur(&a, "reorder test").unwrap();
        let eigs = s.eigenvalues();
        // Select the eigenvalue currently in the last position.
        let target = eigs[5];
        let mut select = vec![false; 6];
        select[5] = true;

        let mut t = s.t.clone();
        let mut q = s.q.clone();
        reorder_selected_to_top(&mut t, &mut q, &select);

        assert!((t[[0, 0]] - target).norm() < 1e-10 * fro(&a));
        let qh = q.t().mapv(|z| z.conj());
        let recon = q.dot(&t).dot(&qh);
        assert!(fro(&(&recon - &a)) < 1e-11 * fro(&a));
        for i in 0..6 {
            for j in 0..i {
                assert_eq!(t[[i, j]], cx(0.0, 0.0));
            }
        }
    }

    #[test]
    fn sylvester_solves_block_decoupling() {
        let t11 = array![[cx(2.0, 1.0), cx(0.3, 0.0)], [cx(0.0, 0.0), cx(3.0, -1.0)]];
        let t22 = array![[cx(-1.0, 0.2), cx(0.1, 0.4)], [cx(0.0, 0.0), cx(-2.0, 0.0)]];
        let t12 = array![[cx(1.0, 0.0), cx(0.0, 1.0)], [cx(0.5, 0.5), cx(-1.0, 0.0)]];
        let y = sylvester_triangular(&t11, &t22, &t12).unwrap();
        let resid = &t11.dot(&y) - &y.dot(&t22);
        assert!(fro(&(&resid - &t12)) < 1e-13);
    }

    #[test]
    fn sylvester_rejects_touching_spectra() {
        let t11 = array![[cx(1.0, 0.0)]];
        let t22 = array![[cx(1.0, 0.0)]];
        let t12 = array![[cx(1.0, 0.0)]];
        assert!(matches!(
            sylvester_triangular(&t11, &t22, &t12),
            Err(LinalgError::ClusterSeparation)
        ));
    }
}
