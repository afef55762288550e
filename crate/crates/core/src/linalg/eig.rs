//! Eigenvalue clustering and spectral (Riesz) projections.
//!
//! Projections come from the reordered Schur form: move one cluster to the
//! leading block, solve a triangular Sylvester equation for the coupling,
//! and assemble `P = Q [I Y; 0 0] Q^H`. Eigenvector matrices are never
//! formed, so defective spectra (Jordan blocks) stay well-behaved.
//!
//! Clustering starts as single linkage at `cluster_tol * ||A||` and is
//! widened when the resulting projectors fail their own invariants, which
//! is what happens when QR scatters a defective eigenvalue across a disk
//! of radius ~ eps^(1/m). A fully merged spectrum degenerates to P = I,
//! so the widening loop always terminates.

use ndarray::Array2;

use super::matrix::{Cx, Matrix};
use super::schur::{reorder_selected_to_top, schur, sylvester_triangular, Schur};
use super::LinalgError;

/// One eigenvalue cluster with its algebraic multiplicity and Riesz projector.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub eigenvalue: Cx,
    pub multiplicity: usize,
    pub projection: Matrix,
}

/// Clustered spectrum of a square matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub dim: usize,
    pub clusters: Vec<SpectralCluster>,
    /// Relative clustering tolerance the decomposition was requested at.
    pub cluster_tol: f64,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<Cx> {
        self.clusters.iter().map(|c| c.eigenvalue).collect()
    }

    pub fn spectral_abscissa(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.eigenvalue.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.eigenvalue.norm())
            .fold(0.0, f64::max)
    }
}

/// Default relative clustering tolerance.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Spectral decomposition with the default clustering tolerance.
pub fn eig_decompose(a: &Matrix, cluster_tol: f64) -> Result<SpectralDecomposition, LinalgError> {
    eig_decompose_named(a, cluster_tol, "matrix")
}

/// Like [`eig_decompose`] but with a caller-supplied name for diagnostics.
pub fn eig_decompose_named(
    a: &Matrix,
    cluster_tol: f64,
    name: &str,
) -> Result<SpectralDecomposition, LinalgError> {
    let n = a.dim();
    let context = format!("{name} ({n}x{n})");
    let s = schur(a.array(), &context)?;
    let eigs = s.eigenvalues();
    let anorm = a.norm_2();
    let merge_dist = cluster_tol * anorm;

    let mut groups = single_linkage(&eigs, merge_dist);

    loop {
        match build_clusters(&s, &groups) {
            Ok(clusters) => {
                if groups.len() <= 1 || quality_ok(&clusters, n, cluster_tol) {
                    let mut clusters = clusters;
                    clusters.sort_by(|x, y| {
                        (x.eigenvalue.re, x.eigenvalue.im)
                            .partial_cmp(&(y.eigenvalue.re, y.eigenvalue.im))
                            .unwrap()
                    });
                    return Ok(SpectralDecomposition {
                        dim: n,
                        clusters,
                        cluster_tol,
                    });
                }
            }
            Err(LinalgError::ClusterSeparation) => {}
            Err(e) => return Err(e),
        }
        merge_closest(&mut groups, &eigs);
    }
}

/// Eigenvalues only (Schur diagonal, unclustered).
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Cx>, LinalgError> {
    Ok(schur(a.array(), "matrix")?.eigenvalues())
}

/// max Re of the spectrum.
pub fn spectral_abscissa(a: &Matrix) -> Result<f64, LinalgError> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Connected components of the "within merge_dist" graph.
fn single_linkage(eigs: &[Cx], merge_dist: f64) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() <= merge_dist {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut map: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(g) => map[g].push(i),
            None => {
                roots.push(r);
                map.push(vec![i]);
            }
        }
    }
    map
}

/// Merge the two groups at minimal pairwise eigenvalue distance.
fn merge_closest(groups: &mut Vec<Vec<usize>>, eigs: &[Cx]) {
    if groups.len() < 2 {
        return;
    }
    let mut best = (0usize, 1usize);
    let mut best_d = f64::INFINITY;
    for gi in 0..groups.len() {
        for gj in (gi + 1)..groups.len() {
            for &i in &groups[gi] {
                for &j in &groups[gj] {
                    let d = (eigs[i] - eigs[j]).norm();
                    if d < best_d {
                        best_d = d;
                        best = (gi, gj);
                    }
                }
            }
        }
    }
    let merged = groups.remove(best.1);
    groups[best.0].extend(merged);
}

fn build_clusters(s: &Schur, groups: &[Vec<usize>]) -> Result<Vec<SpectralCluster>, LinalgError> {
    let n = s.dim();
    let mut out = Vec::with_capacity(groups.len());
    for group in groups {
        let m = group.len();
        let mean = group.iter().map(|&i| s.t[[i, i]]).sum::<Cx>() / m as f64;
        let projection = if m == n {
            Matrix::identity(n)
        } else {
            let mut select = vec![false; n];
            for &i in group {
                select[i] = true;
            }
            let mut t = s.t.clone();
            let mut q = s.q.clone();
            reorder_selected_to_top(&mut t, &mut q, &select);

            let t11 = t.slice(ndarray::s![..m, ..m]).to_owned();
            let t22 = t.slice(ndarray::s![m.., m..]).to_owned();
            let t12 = t.slice(ndarray::s![..m, m..]).to_owned();
            let y = sylvester_triangular(&t11, &t22, &t12)?;

            // P = Q [I Y; 0 0] Q^H.
            let mut w = Array2::<Cx>::zeros((m, n));
            for i in 0..m {
                w[[i, i]] = Cx::new(1.0, 0.0);
                for j in m..n {
                    w[[i, j]] = y[[i, j - m]];
                }
            }
            let qh = q.t().mapv(|z| z.conj());
            let wqh = w.dot(&qh);
            let qk = q.slice(ndarray::s![.., ..m]).to_owned();
            let p = qk.dot(&wqh);
            if !p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(LinalgError::ClusterSeparation);
            }
            Matrix::new(p)?
        };
        out.push(SpectralCluster {
            eigenvalue: mean,
            multiplicity: m,
            projection,
        });
    }
    Ok(out)
}

fn quality_ok(clusters: &[SpectralCluster], n: usize, cluster_tol: f64) -> bool {
    let mut sum = Matrix::zeros(n);
    for c in clusters {
        sum = &sum + &c.projection;
    }
    if sum.fro_dist(&Matrix::identity(n)) > 1e-8 * n as f64 {
        return false;
    }
    let tol = 10.0 * cluster_tol;
    for (i, ci) in clusters.iter().enumerate() {
        let p = &ci.projection;
        let pnorm = p.norm_fro();
        if p.matmul(p).fro_dist(p) > tol * pnorm.max(1.0) {
            return false;
        }
        for cj in clusters.iter().skip(i + 1) {
            let cross = ci.projection.matmul(&cj.projection).norm_fro();
            if cross > tol * pnorm.max(1.0) * cj.projection.norm_fro().max(1.0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn diagonal_matrix_gets_unit_projections() {
        let a = Matrix::diag(&[cx(-1.0, 0.0), cx(-2.0, 0.0)]);
        let d = eig_decompose(&a, 1e-8).unwrap();
        assert_eq!(d.clusters.len(), 2);
        // Sorted by (re, im): -2 first.
        assert!((d.clusters[0].eigenvalue - cx(-2.0, 0.0)).norm() < 1e-12);
        assert!((d.clusters[1].eigenvalue - cx(-1.0, 0.0)).norm() < 1e-12);
        let p1 = &d.clusters[1].projection;
        let expect = Matrix::diag(&[cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert!(p1.fro_dist(&expect) < 1e-12);
    }

    #[test]
    fn jordan_block_is_one_cluster_with_identity_projection() {
        let j2 = Matrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let d = eig_decompose(&j2, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.clusters.len(), 1);
        assert_eq!(d.clusters[0].multiplicity, 2);
        assert!(d.clusters[0].eigenvalue.norm() < 1e-14);
        assert!(d.clusters[0].projection.fro_dist(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn random_matrix_projections_resolve_identity() {
        let a = Matrix::from_fn(6, |i, j| {
            let t = (i * 29 + j * 13) as f64;
            cx((1.3 * t).sin(), (0.7 * t + 1.0).cos())
        });
        let d = eig_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        let total: usize = d.clusters.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 6);
        let mut sum = Matrix::zeros(6);
        for c in &d.clusters {
            sum = &sum + &c.projection;
            let p = &c.projection;
            assert!(p.matmul(p).fro_dist(p) <= 1e-8 * p.norm_fro().max(1.0));
        }
        assert!(sum.fro_dist(&Matrix::identity(6)) <= 1e-8 * 6.0);
    }

    #[test]
    fn projections_commute_with_the_matrix_and_kill_nilpotent_part() {
        // Similarity-transformed Jordan structure: eigenvalue 2 (defective,
        // multiplicity 2) and eigenvalue -1.
        let s = Matrix::from_real_rows(3, &[1.0, 0.5, 0.0, 0.2, 1.0, 0.3, 0.0, -0.4, 1.0]).unwrap();
        let jt = Matrix::from_real_rows(3, &[2.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let s_inv = s.solve(&Matrix::identity(3)).unwrap();
        let a = s.matmul(&jt).matmul(&s_inv);

        let d = eig_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.clusters.len(), 2);
        let anorm = a.norm_2();
        for c in &d.clusters {
            // A P = P A
            let ap = a.matmul(&c.projection);
            let pa = c.projection.matmul(&a);
            assert!(ap.fro_dist(&pa) <= 1e-9 * anorm.max(1.0));
            // (A - lambda)^m P ~ 0
            let shifted = &a - &Matrix::scaled_identity(3, c.eigenvalue);
            let pw = shifted.matpow(c.multiplicity).matmul(&c.projection);
            assert!(pw.norm_fro() <= 1e-6 * anorm.powi(c.multiplicity as i32));
        }
    }

    #[test]
    fn scattered_defective_spectrum_collapses_to_one_cluster() {
        // Lower bidiagonal with constant diagonal: one defective eigenvalue.
        // QR scatters it; the widening loop must recover a single cluster.
        let n = 6;
        let c0 = 7.0;
        let a = Matrix::from_fn(n, |i, j| {
            if i == j {
                cx(-c0, 0.0)
            } else if i == j + 1 {
                cx(c0, 0.0)
            } else {
                cx(0.0, 0.0)
            }
        });
        let d = eig_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.clusters.len(), 1, "expected full merge, got {:?}", d.eigenvalues());
        assert!((d.clusters[0].eigenvalue - cx(-c0, 0.0)).norm() < 1e-9 * c0);
        assert!(d.clusters[0].projection.fro_dist(&Matrix::identity(n)) < 1e-12);
    }

    #[test]
    fn symmetric_tridiagonal_spectrum_is_accurate() {
        // Second-difference matrix, eigenvalues -2c(1 - cos(k pi / (n+1))).
        let n = 8;
        let c = ((n + 1) * (n + 1)) as f64;
        let a = Matrix::from_fn(n, |i, j| {
            if i == j {
                cx(-2.0 * c, 0.0)
            } else if i.abs_diff(j) == 1 {
                cx(c, 0.0)
            } else {
                cx(0.0, 0.0)
            }
        });
        let d = eig_decompose(&a, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.clusters.len(), n);
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| -2.0 * c * (1.0 - (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()))
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (cl, e) in d.clusters.iter().zip(expect.iter()) {
            assert!(
                (cl.eigenvalue - cx(*e, 0.0)).norm() <= 1e-8 * (1.0 + a.norm_2()),
                "eigenvalue {} vs expected {}",
                cl.eigenvalue,
                e
            );
        }
    }
}
