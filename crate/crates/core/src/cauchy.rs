//! The Cauchy-problem operators tying a generator to its semigroup:
//!
//! ```text
//! B_l(t) = integral_0^t e^{l(t-s)} T(s) ds
//! F_l(t) = integral_0^t e^{-l s} B_l(s) ds = integral_0^t (t-s) e^{-l s} T(s) ds
//! G_l(t) = e^{-l t} I
//! ```
//!
//! with `(l - A) B_l(t) = e^{lt} I - T(t)` and
//! `(l - A) F_l(t) + G_l(t) B_l(t) = t I`.
//!
//! Three independent evaluation routes are provided. The augmented
//! block-exponential route is the default because it stays well-defined
//! when `l` is an eigenvalue of `A`, where the operators exist but the
//! naive resolvent form does not.

use ndarray::Array2;
use serde::Serialize;
use std::sync::OnceLock;

use crate::linalg::{
    eigenvalues, expm, hyper_range_with_floor, kernel_with_floor, min_norm_solve, spectral_abscissa,
    vec_norm, CVector,
    Cx, LinalgError, Matrix, MinNormSolution,
};
use crate::report::{cx_serde, ResidualCheck};

/// Absolute tolerance for the adaptive quadrature route.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Residual tolerance (relative to the identity scale) for Lemma checks.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Residual tolerance for the power identities, applied to scale^n.
pub const POWER_TOL: f64 = 1e-7;

/// Containment tolerance for kernel / hyper-range inclusions.
pub const CONTAIN_TOL: f64 = 1e-8;

/// Rank tolerance used for chain construction and subspace extraction.
pub const RANK_TOL: f64 = 1e-10;

/// Evaluation route for the Cauchy operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CauchyMethod {
    /// Top-right block of an augmented matrix exponential (Van Loan).
    BlockExp,
    /// Resolvent closed form; requires `l` away from the spectrum.
    ResolventForm,
    /// Adaptive composite Gauss-Legendre on the defining integral.
    Quadrature,
}

#[derive(Debug, thiserror::Error)]
pub enum CauchyError {
    #[error("t must be nonnegative (got {t})")]
    NegativeTime { t: f64 },
    #[error(
        "resolvent form is near-singular: dist(lambda, spectrum) = {dist:.3e} <= {threshold:.3e}; use the blockExp route"
    )]
    NearSingular { dist: f64, threshold: f64 },
    #[error("quadrature did not reach absolute tolerance {tol:.1e} (last refinement changed by {change:.3e})")]
    QuadratureNonConvergence { tol: f64, change: f64 },
    #[error("lemma hypothesis violated: ||(lambda-A)u - B v|| = {defect:.3e} exceeds {allowed:.3e}")]
    HypothesisViolated { defect: f64, allowed: f64 },
    #[error("postcondition failed: {context}")]
    PostconditionFailed { context: String },
    #[error("input chain inconsistent: {context}")]
    ChainInconsistent { context: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The operators `B_l(t)`, `F_l(t)` and the scalar of `G_l(t)` for one
/// `(lambda, t)` pair, with the route that produced them.
#[derive(Debug, Clone)]
pub struct CauchyOps {
    pub lambda: Cx,
    pub t: f64,
    pub b: Matrix,
    pub f: Matrix,
    pub g_scalar: Cx,
    pub method: CauchyMethod,
}

/// Magnitude scale for residual tolerances: `t (1 + ||A||) max(1, e^{Re l t})`.
pub fn residual_scale(a_norm: f64, lambda: Cx, t: f64) -> f64 {
    t * (1.0 + a_norm) * (lambda.re * t).exp().max(1.0)
}

/// Machine-level absolute floor so that exact-zero cases (t = 0) are judged
/// at ~1e-14 rather than at zero tolerance.
pub fn residual_floor(a_norm: f64) -> f64 {
    1e-14 * (1.0 + a_norm)
}

impl CauchyOps {
    pub fn build(a: &Matrix, lambda: Cx, t: f64, method: CauchyMethod) -> Result<Self, CauchyError> {
        let b = build_b(a, lambda, t, method)?;
        let f = build_f(a, lambda, t, method)?;
        Ok(CauchyOps {
            lambda,
            t,
            b,
            f,
            g_scalar: (-lambda * t).exp(),
            method,
        })
    }

    pub fn scale(&self, a: &Matrix) -> f64 {
        residual_scale(a.norm_2(), self.lambda, self.t)
    }
}

/// `B_l(t)` by the requested route.
pub fn build_b(a: &Matrix, lambda: Cx, t: f64, method: CauchyMethod) -> Result<Matrix, CauchyError> {
    if !(t >= 0.0) {
        return Err(CauchyError::NegativeTime { t });
    }
    let n = a.dim();
    match method {
        CauchyMethod::BlockExp => {
            // exp(t [[lI, I], [0, A]]) has B_l(t) in the top-right block.
            let mut m = Array2::<Cx>::zeros((2 * n, 2 * n));
            for i in 0..n {
                m[[i, i]] = lambda;
                m[[i, n + i]] = Cx::new(1.0, 0.0);
                for j in 0..n {
                    m[[n + i, n + j]] = a[(i, j)];
                }
            }
            let aug = Matrix::new(m).expect("augmented matrix is finite");
            let big = expm(&aug.scale(Cx::new(t, 0.0)))?;
            Ok(Matrix::from_fn(n, |i, j| big[(i, n + j)]))
        }
        CauchyMethod::ResolventForm => {
            let shifted = resolvent_shifted(a, lambda)?;
            // B = (lI - A)^{-1} (e^{lt} I - e^{tA})
            let ta = expm(&a.scale(Cx::new(t, 0.0)))?;
            let rhs = &Matrix::scaled_identity(n, (lambda * t).exp()) - &ta;
            Ok(shifted.solve(&rhs)?)
        }
        CauchyMethod::Quadrature => {
            let rate = a.norm_2() + lambda.norm() + 1.0;
            integrate_refining(t, rate, &|s| {
                let ts = expm(&a.scale(Cx::new(s, 0.0)))?;
                Ok(ts.scale((lambda * (t - s)).exp()))
            })
        }
    }
}

/// `F_l(t)` by the requested route.
pub fn build_f(a: &Matrix, lambda: Cx, t: f64, method: CauchyMethod) -> Result<Matrix, CauchyError> {
    if !(t >= 0.0) {
        return Err(CauchyError::NegativeTime { t });
    }
    let n = a.dim();
    match method {
        CauchyMethod::BlockExp => {
            // Nested Van Loan block: exp(t [[0, I, 0], [0, 0, I], [0, 0, A - lI]])
            // carries F_l(t) = integral (t-s) e^{-ls} T(s) ds in its top-right block.
            let mut m = Array2::<Cx>::zeros((3 * n, 3 * n));
            for i in 0..n {
                m[[i, n + i]] = Cx::new(1.0, 0.0);
                m[[n + i, 2 * n + i]] = Cx::new(1.0, 0.0);
                for j in 0..n {
                    m[[2 * n + i, 2 * n + j]] = a[(i, j)];
                }
                m[[2 * n + i, 2 * n + i]] -= lambda;
            }
            let aug = Matrix::new(m).expect("augmented matrix is finite");
            let big = expm(&aug.scale(Cx::new(t, 0.0)))?;
            Ok(Matrix::from_fn(n, |i, j| big[(i, 2 * n + j)]))
        }
        CauchyMethod::ResolventForm => {
            let shifted = resolvent_shifted(a, lambda)?;
            // F = t (lI-A)^{-1} + (lI-A)^{-2} (e^{(A-lI)t} - I)
            let r = shifted.solve(&Matrix::identity(n))?;
            let mut gen = a.clone();
            for i in 0..n {
                gen[(i, i)] -= lambda;
            }
            let e = expm(&gen.scale(Cx::new(t, 0.0)))?;
            let diff = &e - &Matrix::identity(n);
            Ok(&r.scale(Cx::new(t, 0.0)) + &r.matmul(&r.matmul(&diff)))
        }
        CauchyMethod::Quadrature => {
            let rate = a.norm_2() + lambda.norm() + 1.0;
            integrate_refining(t, rate, &|s| {
                let b = build_b(a, lambda, s, CauchyMethod::BlockExp)?;
                Ok(b.scale((-lambda * s).exp()))
            })
        }
    }
}

/// `lI - A` with the near-singularity guard for the resolvent route.
fn resolvent_shifted(a: &Matrix, lambda: Cx) -> Result<Matrix, CauchyError> {
    let eigs = eigenvalues(a)?;
    let dist = eigs
        .iter()
        .map(|&e| (e - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let threshold = 1e-6 * a.norm_2();
    if dist <= threshold {
        return Err(CauchyError::NearSingular { dist, threshold });
    }
    let n = a.dim();
    Ok(&Matrix::scaled_identity(n, lambda) - a)
}

// --- Gauss-Legendre quadrature -------------------------------------------

fn gl16() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| legendre_rule(16))
}

/// Nodes and weights of the k-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
fn legendre_rule(k: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(k, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Legendre P_k(x) and derivative via the three-term recurrence.
fn legendre_eval(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

type Integrand<'a> = dyn Fn(f64) -> Result<Matrix, CauchyError> + 'a;

fn integrate_panels(f: &Integrand, t: f64, panels: usize) -> Result<Matrix, CauchyError> {
    let probe = f(0.0)?;
    let n = probe.dim();
    let mut acc = Matrix::zeros(n);
    let w = t / panels as f64;
    for p in 0..panels {
        let a = w * p as f64;
        let mid = a + 0.5 * w;
        let half = 0.5 * w;
        for &(x, wt) in gl16() {
            let val = f(mid + half * x)?;
            acc = &acc + &val.scale(Cx::new(wt * half, 0.0));
        }
    }
    Ok(acc)
}

/// Composite Gauss-Legendre with panel count sized by the integrand's
/// rate `||A|| t`, refined by doubling until the result is stable to
/// `QUADRATURE_TOL` in the Frobenius norm.
fn integrate_refining(t: f64, rate: f64, f: &Integrand) -> Result<Matrix, CauchyError> {
    if t == 0.0 {
        let probe = f(0.0)?;
        return Ok(Matrix::zeros(probe.dim()));
    }
    let mut panels = ((t * rate / 6.0).ceil() as usize).clamp(1, 256);
    let mut prev = integrate_panels(f, t, panels)?;
    let mut change = f64::INFINITY;
    for _ in 0..6 {
        panels *= 2;
        let next = integrate_panels(f, t, panels)?;
        change = next.fro_dist(&prev);
        if change <= QUADRATURE_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(CauchyError::QuadratureNonConvergence {
        tol: QUADRATURE_TOL,
        change,
    })
}

// --- Lemma verifiers -------------------------------------------------------

/// Exponential bound instantiation for the F-operator estimate.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub m: f64,
    pub omega: f64,
    pub f_norm: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub generator: String,
    #[serde(with = "cx_serde")]
    pub lambda: Cx,
    pub t: f64,
    pub method: CauchyMethod,
    pub checks: Vec<ResidualCheck>,
    pub bound: BoundCheck,
    pub pass: bool,
}

/// Residual report for the defining identity `(l-A)F + G B = tI`, the
/// factorization `(l-A)B = e^{lt} - T(t)` in both orders, the pairwise
/// commutators, and the exponential bound on `||F||`.
pub fn verify_lemma1(a: &Matrix, lambda: Cx, t: f64, name: &str) -> Result<Lemma1Report, CauchyError> {
    let ops = CauchyOps::build(a, lambda, t, CauchyMethod::BlockExp)?;
    let n = a.dim();
    let anorm = a.norm_2();
    let scale = residual_scale(anorm, lambda, t);
    let floor = residual_floor(anorm);

    let tt = expm(&a.scale(Cx::new(t, 0.0)))?;
    let shifted = &Matrix::scaled_identity(n, lambda) - a;

    let mut checks = Vec::new();
    // (l-A) F + e^{-lt} B = t I
    let lhs = &shifted.matmul(&ops.f) + &ops.b.scale(ops.g_scalar);
    let resid = lhs.fro_dist(&Matrix::scaled_identity(n, Cx::new(t, 0.0)));
    checks.push(ResidualCheck::new(
        "(l-A)F + G B = tI",
        resid,
        scale,
        IDENTITY_TOL,
        floor,
    ));

    // (l-A) B = e^{lt} I - T(t), both orders.
    let target = &Matrix::scaled_identity(n, (lambda * t).exp()) - &tt;
    checks.push(ResidualCheck::new(
        "(l-A)B = e^{lt} - T(t)",
        shifted.matmul(&ops.b).fro_dist(&target),
        scale,
        IDENTITY_TOL,
        floor,
    ));
    checks.push(ResidualCheck::new(
        "B(l-A) = e^{lt} - T(t)",
        ops.b.matmul(&shifted).fro_dist(&target),
        scale,
        IDENTITY_TOL,
        floor,
    ));

    // Pairwise commutation.
    checks.push(ResidualCheck::new(
        "[F, B] = 0",
        ops.f.matmul(&ops.b).fro_dist(&ops.b.matmul(&ops.f)),
        scale,
        IDENTITY_TOL,
        floor,
    ));
    checks.push(ResidualCheck::new(
        "[F, l-A] = 0",
        ops.f.matmul(&shifted).fro_dist(&shifted.matmul(&ops.f)),
        scale,
        IDENTITY_TOL,
        floor,
    ));
    checks.push(ResidualCheck::new(
        "[B, l-A] = 0",
        ops.b.matmul(&shifted).fro_dist(&shifted.matmul(&ops.b)),
        scale,
        IDENTITY_TOL,
        floor,
    ));

    // ||F|| <= M / (omega - Re l)^2 e^{(omega - Re l) t} with the witness
    // omega = max(abscissa, Re l) + 1, making the margin at least one.
    let abscissa = spectral_abscissa(a)?;
    let omega = abscissa.max(lambda.re) + 1.0;
    let grid_max = t.max(1.0);
    let mut m = 1.0f64;
    for k in 0..=32 {
        let s = grid_max * k as f64 / 32.0;
        let norm = expm(&a.scale(Cx::new(s, 0.0)))?.norm_2();
        m = m.max(norm * (-omega * s).exp());
    }
    let margin = omega - lambda.re;
    let rhs = m / (margin * margin) * (margin * t).exp();
    let f_norm = ops.f.norm_2();
    let bound = BoundCheck {
        m,
        omega,
        f_norm,
        rhs,
        holds: f_norm <= rhs * (1.0 + 1e-9),
    };

    let pass = checks.iter().all(|c| c.pass) && bound.holds;
    Ok(Lemma1Report {
        generator: name.to_string(),
        lambda,
        t,
        method: CauchyMethod::BlockExp,
        checks,
        bound,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerIdentityReport {
    pub generator: String,
    #[serde(with = "cx_serde")]
    pub lambda: Cx,
    pub t: f64,
    pub n_max: usize,
    pub checks: Vec<ResidualCheck>,
    pub kernel_inclusions: Vec<bool>,
    pub hyper_range_included: bool,
    pub pass: bool,
}

/// `(e^{lt} - T(t))^n = (l-A)^n B^n` for n = 1..n_max (both orders), the
/// kernel inclusions `N((l-A)^n) ⊆ N((e^{lt}-T(t))^n)`, and the
/// hyper-range inclusion `R^inf(e^{lt}-T(t)) ⊆ R^inf(l-A)`.
pub fn verify_power_identities(
    a: &Matrix,
    lambda: Cx,
    t: f64,
    n_max: usize,
    name: &str,
) -> Result<PowerIdentityReport, CauchyError> {
    assert!(n_max <= 6, "power identities are checked up to n = 6");
    let n = a.dim();
    let ops = CauchyOps::build(a, lambda, t, CauchyMethod::BlockExp)?;
    let anorm = a.norm_2();
    let scale = residual_scale(anorm, lambda, t);
    let floor = residual_floor(anorm);

    let tt = expm(&a.scale(Cx::new(t, 0.0)))?;
    let shifted = &Matrix::scaled_identity(n, lambda) - a;
    let target = &Matrix::scaled_identity(n, (lambda * t).exp()) - &tt;

    // Noise scales of the differences: under eigenvalue aliasing the
    // shifted operators are numerically zero, so rank decisions must be
    // anchored to the minuend scale rather than the difference norm.
    let gen_scale = lambda.norm().max(anorm).max(1e-300);
    let semi_scale = (lambda * t).exp().norm().max(tt.norm_2()).max(1e-300);

    let mut checks = Vec::new();
    let mut kernel_inclusions = Vec::new();
    let mut pass = true;

    for k in 1..=n_max {
        let lhs = target.matpow(k);
        let rhs_left = shifted.matpow(k).matmul(&ops.b.matpow(k));
        let rhs_right = ops.b.matpow(k).matmul(&shifted.matpow(k));
        let scale_k = scale.powi(k as i32).max(floor);
        checks.push(ResidualCheck::new(
            format!("(e^{{lt}}-T)^{k} = (l-A)^{k} B^{k}"),
            lhs.fro_dist(&rhs_left),
            scale_k,
            POWER_TOL,
            floor,
        ));
        checks.push(ResidualCheck::new(
            format!("(e^{{lt}}-T)^{k} = B^{k} (l-A)^{k}"),
            lhs.fro_dist(&rhs_right),
            scale_k,
            POWER_TOL,
            floor,
        ));

        // Floors at the k-th power of the constituent scale: a power that
        // vanishes exactly must yield the full kernel despite eps junk.
        let ker_a = kernel_with_floor(
            &shifted.matpow(k),
            RANK_TOL,
            RANK_TOL * gen_scale.powi(k as i32),
        )?;
        let ker_t = kernel_with_floor(&lhs, RANK_TOL, RANK_TOL * semi_scale.powi(k as i32))?;
        let included = ker_t.contains(&ker_a, CONTAIN_TOL)?;
        kernel_inclusions.push(included);
        pass &= included;
    }
    pass &= checks.iter().all(|c| c.pass);

    let hr_t = hyper_range_with_floor(&target, RANK_TOL, RANK_TOL * semi_scale)?;
    let hr_a = hyper_range_with_floor(&shifted, RANK_TOL, RANK_TOL * gen_scale)?;
    let hyper_range_included = hr_a.contains(&hr_t, CONTAIN_TOL)?;
    pass &= hyper_range_included;

    Ok(PowerIdentityReport {
        generator: name.to_string(),
        lambda,
        t,
        n_max,
        checks,
        kernel_inclusions,
        hyper_range_included,
        pass,
    })
}

// --- The w-construction and the double chain ------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub solve_residual: f64,
    pub apply_residual: f64,
    pub norm_bound_lhs: f64,
    pub norm_bound_rhs: f64,
    pub pass: bool,
}

/// Given `(l-A)u = B_l(t) v`, produce `w = (F_l(t) v + e^{-lt} u) / t` with
/// `(l-A)w = v`, `B_l(t) w = u`, and the norm bound
/// `||w|| <= (||F/t|| + ||G/t||) max(||u||, ||v||)`.
///
/// The division by `t` makes the construction consistent with the identity
/// `(l-A)F + G B = tI`: the normalized pair `(F/t, G/t)` is the exact
/// two-sided inverse the lift needs.
pub fn lift_w(
    a: &Matrix,
    lambda: Cx,
    t: f64,
    u: &CVector,
    v: &CVector,
) -> Result<(CVector, LiftReport), CauchyError> {
    let ops = CauchyOps::build(a, lambda, t, CauchyMethod::BlockExp)?;
    lift_w_with(a, &ops, u, v)
}

/// Same as [`lift_w`] with prebuilt operators.
pub fn lift_w_with(
    a: &Matrix,
    ops: &CauchyOps,
    u: &CVector,
    v: &CVector,
) -> Result<(CVector, LiftReport), CauchyError> {
    let n = a.dim();
    let shifted = &Matrix::scaled_identity(n, ops.lambda) - a;
    let unorm = vec_norm(u);
    let vnorm = vec_norm(v);
    let size = unorm + vnorm;

    let defect = vec_norm(&(&shifted.mul_vec(u) - &ops.b.mul_vec(v)));
    let allowed = 1e-8 * size.max(1e-300);
    if defect > allowed {
        return Err(CauchyError::HypothesisViolated { defect, allowed });
    }

    if ops.t == 0.0 {
        // B and F vanish; only the trivial lift exists.
        if size > allowed {
            return Err(CauchyError::PostconditionFailed {
                context: "lift_w at t = 0 is only defined for u = v = 0".into(),
            });
        }
        let w: CVector = ndarray::Array1::zeros(n);
        return Ok((
            w,
            LiftReport {
                solve_residual: 0.0,
                apply_residual: 0.0,
                norm_bound_lhs: 0.0,
                norm_bound_rhs: 0.0,
                pass: true,
            },
        ));
    }

    let inv_t = Cx::new(1.0 / ops.t, 0.0);
    let w = (&ops.f.mul_vec(v) + &u.mapv(|z| z * ops.g_scalar)).mapv(|z| z * inv_t);

    let solve_residual = vec_norm(&(&shifted.mul_vec(&w) - v));
    let apply_residual = vec_norm(&(&ops.b.mul_vec(&w) - u));
    let norm_bound_lhs = vec_norm(&w);
    let norm_bound_rhs =
        (ops.f.norm_2() + ops.g_scalar.norm()) / ops.t * unorm.max(vnorm) * (1.0 + 1e-8);

    let tol = 1e-7 * size.max(1e-300);
    let pass = solve_residual <= tol && apply_residual <= tol && norm_bound_lhs <= norm_bound_rhs;
    if !pass {
        return Err(CauchyError::PostconditionFailed {
            context: format!(
                "lift_w: solve residual {solve_residual:.3e}, apply residual {apply_residual:.3e}, \
                 norm {norm_bound_lhs:.3e} vs bound {norm_bound_rhs:.3e}"
            ),
        });
    }
    Ok((
        w,
        LiftReport {
            solve_residual,
            apply_residual,
            norm_bound_lhs,
            norm_bound_rhs,
            pass,
        },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubleChainReport {
    pub depth: usize,
    pub max_cell_residual: f64,
    pub max_diag_residual: f64,
    pub growth_statistic: f64,
    pub envelope_base: f64,
    pub envelope_ok: bool,
    pub pass: bool,
}

/// Fill the double chain `x_{i,j} = (F x_{i-1,j} + G x_{i,j-1}) / t` from a
/// row chain for `(l-A)` and a column chain for `B_l(t)` sharing the
/// corner `x_{0,0}`, and verify the chain identities plus the diagonal
/// relation `(e^{lt} - T(t)) y_i = y_{i-1}` for `y_i = x_{i,i}`.
///
/// As in [`lift_w`], the recursion uses the normalized pair `(F/t, G/t)`
/// so each new cell is the exact simultaneous preimage of its neighbors.
pub fn build_double_chain(
    a: &Matrix,
    lambda: Cx,
    t: f64,
    row_chain: &[CVector],
    col_chain: &[CVector],
    depth: usize,
) -> Result<(Vec<Vec<CVector>>, DoubleChainReport), CauchyError> {
    let n = a.dim();
    if row_chain.len() <= depth || col_chain.len() <= depth {
        return Err(CauchyError::ChainInconsistent {
            context: format!(
                "need chains of length > depth = {depth} (got {} and {})",
                row_chain.len(),
                col_chain.len()
            ),
        });
    }
    let ops = CauchyOps::build(a, lambda, t, CauchyMethod::BlockExp)?;
    let shifted = &Matrix::scaled_identity(n, lambda) - a;

    let delta = row_chain
        .iter()
        .chain(col_chain.iter())
        .map(vec_norm)
        .fold(0.0, f64::max);
    let ctol = 1e-8 * (1.0 + delta);

    if t == 0.0 && delta > ctol {
        return Err(CauchyError::ChainInconsistent {
            context: "double chain at t = 0 is only defined for zero chains".into(),
        });
    }
    let (f_hat, g_hat) = if t == 0.0 {
        (Matrix::zeros(n), Cx::new(0.0, 0.0))
    } else {
        let inv_t = Cx::new(1.0 / t, 0.0);
        (ops.f.scale(inv_t), ops.g_scalar * inv_t)
    };

    // Preconditions: shared corner and both defining recursions.
    if vec_norm(&(&row_chain[0] - &col_chain[0])) > ctol {
        return Err(CauchyError::ChainInconsistent {
            context: "row and column chains disagree at the shared corner".into(),
        });
    }
    for i in 1..=depth {
        if vec_norm(&(&shifted.mul_vec(&row_chain[i]) - &row_chain[i - 1])) > ctol {
            return Err(CauchyError::ChainInconsistent {
                context: format!("(l-A) x_{{{i},0}} != x_{{{},0}}", i - 1),
            });
        }
        if vec_norm(&(&ops.b.mul_vec(&col_chain[i]) - &col_chain[i - 1])) > ctol {
            return Err(CauchyError::ChainInconsistent {
                context: format!("B x_{{0,{i}}} != x_{{0,{}}}", i - 1),
            });
        }
    }

    let mut grid: Vec<Vec<CVector>> = vec![vec![ndarray::Array1::zeros(n); depth + 1]; depth + 1];
    for i in 0..=depth {
        grid[i][0] = row_chain[i].clone();
    }
    for j in 1..=depth {
        grid[0][j] = col_chain[j].clone();
    }
    for i in 1..=depth {
        for j in 1..=depth {
            let fv = f_hat.mul_vec(&grid[i - 1][j]);
            let gv = grid[i][j - 1].mapv(|z| z * g_hat);
            grid[i][j] = &fv + &gv;
        }
    }

    // Proof-envelope base; cells are bounded by delta * base^{i+j}.
    let base = (f_hat.norm_2() + g_hat.norm()).max(1.0);
    let mut max_cell = 0.0f64;
    let mut envelope_ok = true;
    for i in 1..=depth {
        for j in 1..=depth {
            let env = delta.max(1e-300) * base.powi((i + j) as i32);
            let r1 = vec_norm(&(&shifted.mul_vec(&grid[i][j]) - &grid[i - 1][j]));
            let r2 = vec_norm(&(&ops.b.mul_vec(&grid[i][j]) - &grid[i][j - 1]));
            let rel = r1.max(r2) / env;
            max_cell = max_cell.max(rel);
            if vec_norm(&grid[i][j]) > delta * base.powi((i + j) as i32) * (1.0 + 1e-6) + 1e-300 {
                envelope_ok = false;
            }
        }
    }

    let tt = expm(&a.scale(Cx::new(t, 0.0)))?;
    let diag_op = &Matrix::scaled_identity(n, (lambda * t).exp()) - &tt;
    let mut max_diag = 0.0f64;
    for i in 1..=depth {
        let env = delta.max(1e-300) * base.powi(2 * i as i32);
        let r = vec_norm(&(&diag_op.mul_vec(&grid[i][i]) - &grid[i - 1][i - 1]));
        max_diag = max_diag.max(r / env);
    }

    let mut growth = 0.0f64;
    for (i, row) in grid.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if i + j == 0 {
                continue;
            }
            let norm = vec_norm(cell);
            if norm > 0.0 {
                growth = growth.max(norm.powf(1.0 / (i + j) as f64));
            }
        }
    }

    let pass = max_cell <= 1e-6 && max_diag <= 1e-6 && envelope_ok;
    let report = DoubleChainReport {
        depth,
        max_cell_residual: max_cell,
        max_diag_residual: max_diag,
        growth_statistic: growth,
        envelope_base: base,
        envelope_ok,
        pass,
    };
    Ok((grid, report))
}

/// Build a consistent `(l-A)`-chain of the requested length from a corner
/// vector by repeated minimal-norm solves.
pub fn consistent_row_chain(
    a: &Matrix,
    lambda: Cx,
    corner: &CVector,
    len: usize,
) -> Result<Vec<CVector>, CauchyError> {
    let n = a.dim();
    let shifted = &Matrix::scaled_identity(n, lambda) - a;
    grow_chain(&shifted, corner, len, "(l-A)")
}

/// Build a consistent `B_l(t)`-chain of the requested length from a corner
/// vector by repeated minimal-norm solves.
pub fn consistent_col_chain(
    a: &Matrix,
    lambda: Cx,
    t: f64,
    corner: &CVector,
    len: usize,
) -> Result<Vec<CVector>, CauchyError> {
    let b = build_b(a, lambda, t, CauchyMethod::BlockExp)?;
    grow_chain(&b, corner, len, "B_l(t)")
}

fn grow_chain(
    op: &Matrix,
    corner: &CVector,
    len: usize,
    what: &str,
) -> Result<Vec<CVector>, CauchyError> {
    let mut chain = vec![corner.clone()];
    for i in 1..len {
        match min_norm_solve(op, &chain[i - 1], RANK_TOL)? {
            MinNormSolution::Solution(x) => chain.push(x),
            MinNormSolution::Inconsistent { residual } => {
                return Err(CauchyError::ChainInconsistent {
                    context: format!("{what}-chain broke at step {i} (residual {residual:.3e})"),
                })
            }
        }
    }
    Ok(chain)
}
