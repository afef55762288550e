//! Stability criteria for matrix semigroups, each cross-checked against
//! trajectory simulation:
//!
//! - strong stability from `sigma_A(x) ∩ iR = empty` for all `x` (checked
//!   on a basis sweep plus samples, which is exhaustive in finite
//!   dimension), with the proof-chain sets `sigma_su ∩ iR` and
//!   `sigma_K ∩ iR` reported;
//! - uniform stability from `sigma_{T(t0)}(x) ∩ Gamma = empty`, verified
//!   in both directions against `spectralRadius(T(t0)) < 1`.

use ndarray::Array1;
use serde::Serialize;

use crate::linalg::{
    eig_decompose_named, spectral_abscissa, vec_norm, CVector, Cx, LinalgError, Matrix,
    DEFAULT_CLUSTER_TOL,
};
use crate::local_spectral::{
    local_spectrum_with, surjectivity_and_semiregular_spectra, LocalSpectralError,
    DEFAULT_MEMBERSHIP_TOL,
};
use crate::semigroup::{evaluate_t, trajectory, GeneratorSpec, SemigroupError};

/// Absolute proximity threshold to the imaginary axis / unit circle.
/// Below eigensolver accuracy the criterion is numerically meaningless.
pub const AXIS_TOL: f64 = 1e-9;

/// Trajectory norms must fall below this fraction of the initial norm for
/// the strong-stability simulation to count as decayed.
pub const DECAY_THRESHOLD: f64 = 1e-3;

/// Number of semigroup powers used by the uniform-stability simulation.
const POWER_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityMode {
    Strong,
    Uniform,
}

#[derive(Debug, thiserror::Error)]
pub enum StabilityError {
    #[error("hypothesis-not-met: semigroup is not bounded (omega = {omega:.6e} > {AXIS_TOL:.0e})")]
    HypothesisNotMet { omega: f64 },
    #[error("invalid parameters: {context}")]
    BadParams { context: String },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    LocalSpectral(#[from] LocalSpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sets and scalars the criterion was decided on.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityEvidence {
    /// Spectrum of the relevant operator (A for strong, T(t0) for uniform).
    pub spectrum: Vec<[f64; 2]>,
    /// Union of local spectra over the basis sweep and the samples.
    pub local_spectra_union: Vec<[f64; 2]>,
    /// `sigma_su ∩ iR` from the proof chain (strong mode).
    pub sigma_su_on_axis: Vec<[f64; 2]>,
    /// `sigma_K ∩ iR` from the proof chain (strong mode).
    pub sigma_k_on_axis: Vec<[f64; 2]>,
    /// `spectralRadius(T(t0))` (uniform mode).
    pub spectral_radius: Option<f64>,
    /// Geometric decay ratio observed across semigroup powers.
    pub simulated_ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub mode: StabilityMode,
    pub criterion_holds: bool,
    pub criterion_evidence: StabilityEvidence,
    pub simulation_agrees: bool,
    pub decay_rate: Option<f64>,
}

fn pairs(points: &[Cx]) -> Vec<[f64; 2]> {
    points.iter().map(|z| [z.re, z.im]).collect()
}

fn bounded_or_err(spec: &GeneratorSpec) -> Result<f64, StabilityError> {
    let abscissa = spectral_abscissa(&spec.a)?;
    if abscissa > AXIS_TOL {
        return Err(StabilityError::HypothesisNotMet { omega: abscissa });
    }
    Ok(abscissa)
}

fn basis_and_samples(n: usize, samples: &[CVector]) -> Vec<CVector> {
    let mut out: Vec<CVector> = (0..n)
        .map(|k| {
            Array1::from_shape_fn(n, |i| {
                if i == k {
                    Cx::new(1.0, 0.0)
                } else {
                    Cx::new(0.0, 0.0)
                }
            })
        })
        .collect();
    out.extend(samples.iter().cloned());
    out
}

/// Strong stability: criterion `sigma_A(x) ∩ iR = empty` over the sweep,
/// simulation `||T(t)x||` decaying below [`DECAY_THRESHOLD`] by
/// `t_max = 20 / gap` (or the supplied horizon when the criterion fails).
pub fn strong_stability_check(
    spec: &GeneratorSpec,
    x_samples: &[CVector],
    t_max: Option<f64>,
) -> Result<StabilityVerdict, StabilityError> {
    let abscissa = bounded_or_err(spec)?;
    let n = spec.dim();
    let decomp = eig_decompose_named(&spec.a, DEFAULT_CLUSTER_TOL, &spec.name)?;

    let sweep = basis_and_samples(n, x_samples);
    let mut union: Vec<Cx> = Vec::new();
    for x in &sweep {
        if vec_norm(x) == 0.0 {
            continue;
        }
        for p in local_spectrum_with(&decomp, x, DEFAULT_MEMBERSHIP_TOL).points() {
            if union.iter().all(|&q| (q - p).norm() > 1e-12) {
                union.push(p);
            }
        }
    }
    let criterion_holds = union.iter().all(|l| l.re.abs() > AXIS_TOL);

    let surj = surjectivity_and_semiregular_spectra(&spec.a, &spec.name)?;
    let su_axis: Vec<Cx> = surj
        .sigma_su
        .iter()
        .copied()
        .filter(|l| l.re.abs() <= AXIS_TOL)
        .collect();
    let k_axis: Vec<Cx> = surj
        .sigma_k
        .iter()
        .copied()
        .filter(|l| l.re.abs() <= AXIS_TOL)
        .collect();

    // Simulation horizon from the spectral gap when it exists.
    let gap = -abscissa;
    let t_end = match (criterion_holds, t_max) {
        (true, _) => 20.0 / gap.max(1e-6),
        (false, Some(t)) => t,
        (false, None) => 20.0,
    };
    let t_end = t_end.max(1e-6);

    let t_final = evaluate_t(spec, t_end)?;
    let decayed = sweep.iter().all(|x| {
        let xn = vec_norm(x);
        xn == 0.0 || vec_norm(&t_final.mul_vec(x)) <= DECAY_THRESHOLD * xn
    });
    let simulation_agrees = criterion_holds == decayed;

    // Decay rate of a generic vector (all modes populated).
    let generic: CVector = Array1::from_shape_fn(n, |i| Cx::new(1.0, 0.1 * (i as f64 + 1.0)));
    let grid: Vec<f64> = (0..=32).map(|k| t_end * k as f64 / 32.0).collect();
    let decay_rate = decay_rate_estimate(spec, &generic, &grid).ok();

    Ok(StabilityVerdict {
        mode: StabilityMode::Strong,
        criterion_holds,
        criterion_evidence: StabilityEvidence {
            spectrum: pairs(&decomp.eigenvalues()),
            local_spectra_union: pairs(&union),
            sigma_su_on_axis: pairs(&su_axis),
            sigma_k_on_axis: pairs(&k_axis),
            spectral_radius: None,
            simulated_ratio: None,
        },
        simulation_agrees,
        decay_rate,
    })
}

/// Uniform stability at `t0`: criterion `sigma_{T(t0)}(x) ∩ Gamma = empty`
/// over the sweep, checked in both directions against
/// `spectralRadius(T(t0)) < 1`, with the geometric ratio of `||T(n t0)||`
/// compared to the spectral radius.
pub fn uniform_stability_check(
    spec: &GeneratorSpec,
    t0: f64,
    x_samples: &[CVector],
) -> Result<StabilityVerdict, StabilityError> {
    if !(t0 >= 0.0) {
        return Err(StabilityError::BadParams {
            context: format!("t0 must be nonnegative (got {t0})"),
        });
    }
    let abscissa = bounded_or_err(spec)?;
    let n = spec.dim();
    let t_op = evaluate_t(spec, t0)?;
    let decomp = eig_decompose_named(&t_op, DEFAULT_CLUSTER_TOL, "semigroup value")?;

    let sweep = basis_and_samples(n, x_samples);
    let mut union: Vec<Cx> = Vec::new();
    for x in &sweep {
        if vec_norm(x) == 0.0 {
            continue;
        }
        for p in local_spectrum_with(&decomp, x, DEFAULT_MEMBERSHIP_TOL).points() {
            if union.iter().all(|&q| (q - p).norm() > 1e-12) {
                union.push(p);
            }
        }
    }
    let criterion_holds = union.iter().all(|z| (z.norm() - 1.0).abs() > AXIS_TOL);

    // Exact spectral mapping for matrices.
    let rho = (t0 * abscissa).exp();
    let radius_says_stable = rho < 1.0 - AXIS_TOL;

    // Normalized power iteration with log accumulation, so tiny spectral
    // radii do not underflow before the ratio stabilizes.
    let (ratio, decayed) = simulate_power_decay(&t_op);
    let simulation_agrees = if criterion_holds {
        decayed && ratio.is_some_and(|r| (r - rho).abs() <= 0.1 * rho.max(1e-300))
    } else {
        !decayed
    };

    // Both directions of the finite-dimensional equivalence must agree.
    let equivalence_ok = criterion_holds == radius_says_stable;

    Ok(StabilityVerdict {
        mode: StabilityMode::Uniform,
        criterion_holds,
        criterion_evidence: StabilityEvidence {
            spectrum: pairs(&decomp.eigenvalues()),
            local_spectra_union: pairs(&union),
            sigma_su_on_axis: Vec::new(),
            sigma_k_on_axis: Vec::new(),
            spectral_radius: Some(rho),
            simulated_ratio: ratio,
        },
        simulation_agrees: simulation_agrees && equivalence_ok,
        decay_rate: ratio.map(|r| r.max(1e-300).ln() / t0.max(1e-300)),
    })
}

/// Geometric per-step ratio of `||T^k||` over the tail half of the run,
/// plus whether the norms dropped at least six decades.
fn simulate_power_decay(t_op: &Matrix) -> (Option<f64>, bool) {
    let norm0 = t_op.norm_2();
    if norm0 == 0.0 {
        return (Some(0.0), true);
    }
    let mut z = t_op.scale(Cx::new(1.0 / norm0, 0.0));
    let mut logs = vec![norm0.ln()];
    for _ in 1..POWER_STEPS {
        let next = z.matmul(t_op);
        let nn = next.norm_2();
        if nn == 0.0 {
            logs.push(f64::NEG_INFINITY);
            break;
        }
        logs.push(logs.last().unwrap() + nn.ln());
        z = next.scale(Cx::new(1.0 / nn, 0.0));
    }
    let last = logs.len() - 1;
    if last == 0 {
        return (None, false);
    }
    let mid = logs.len() / 2;
    let ratio = if logs[last].is_finite() {
        Some(((logs[last] - logs[mid]) / (last - mid) as f64).exp())
    } else {
        Some(0.0)
    };
    let decayed = logs[last] - logs[0] < (1e-6f64).ln();
    (ratio, decayed)
}

/// Least-squares slope of `log ||T(t)x||` over the tail half of the grid.
/// Trajectory points below the 1e-300 floor are dropped before fitting.
pub fn decay_rate_estimate(
    spec: &GeneratorSpec,
    x: &CVector,
    grid: &[f64],
) -> Result<f64, StabilityError> {
    if grid.len() < 4 {
        return Err(StabilityError::BadParams {
            context: format!("need at least 4 grid points (got {})", grid.len()),
        });
    }
    let rows = trajectory(spec, x, grid)?;
    let usable: Vec<(f64, f64)> = rows
        .into_iter()
        .filter(|&(_, n)| n > 1e-300)
        .map(|(t, n)| (t, n.ln()))
        .collect();
    if usable.len() < 2 {
        return Err(StabilityError::BadParams {
            context: "trajectory vanished before a slope could be fitted".into(),
        });
    }
    let tail = &usable[usable.len() / 2..];
    let m = tail.len() as f64;
    let mean_t = tail.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_l = tail.iter().map(|p| p.1).sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(t, l) in tail {
        num += (t - mean_t) * (l - mean_l);
        den += (t - mean_t) * (t - mean_t);
    }
    if den == 0.0 {
        return Err(StabilityError::BadParams {
            context: "degenerate time grid for slope fitting".into(),
        });
    }
    Ok(num / den)
}
