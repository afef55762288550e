//! Evaluation of `T(t) = exp(tA)`, numerical certification of the semigroup
//! axioms, and growth-bound estimation `||T(t)|| <= M exp(omega t)`.

use serde::{Deserialize, Serialize};

use crate::linalg::{expm, spectral_abscissa, vec_norm, CVector, Cx, LinalgError, Matrix};

/// Hard cap on `t * ||A||` accepted by [`evaluate_t`].
pub const TIME_HORIZON: f64 = 1e3;

/// Safeguard added to the spectral abscissa when reporting omega.
pub const OMEGA_SAFEGUARD: f64 = 1e-9;

/// A named generator matrix.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub name: String,
    pub a: Matrix,
    pub description: String,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, a: Matrix, description: impl Into<String>) -> Self {
        GeneratorSpec {
            name: name.into(),
            a,
            description: description.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Exponential envelope `||T(t)|| <= m * exp(omega t)` on the sampled grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GrowthBound {
    pub m: f64,
    pub omega: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SemigroupError {
    #[error("t must be nonnegative (got {t})")]
    NegativeTime { t: f64 },
    #[error("time horizon exceeded: t*||A|| = {product:.3e} > {TIME_HORIZON:.0e}; rescale the generator or shorten t")]
    TimeHorizon { product: f64 },
    #[error("grid must be nonnegative and strictly increasing")]
    BadGrid,
    #[error("invalid parameters: {context}")]
    BadParams { context: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `T(t) = exp(tA)`. Satisfies `T(0) = I` exactly.
pub fn evaluate_t(spec: &GeneratorSpec, t: f64) -> Result<Matrix, SemigroupError> {
    if !(t >= 0.0) {
        return Err(SemigroupError::NegativeTime { t });
    }
    let product = t * spec.a.norm_2();
    if product > TIME_HORIZON {
        return Err(SemigroupError::TimeHorizon { product });
    }
    Ok(expm(&spec.a.scale(Cx::new(t, 0.0)))?)
}

/// Growth bound with omega taken as the spectral abscissa (exact for
/// matrices) plus a small safeguard, and M the sampled envelope constant.
pub fn growth_bound(
    spec: &GeneratorSpec,
    t_max: f64,
    samples: usize,
) -> Result<GrowthBound, SemigroupError> {
    if !(t_max > 0.0) {
        return Err(SemigroupError::BadParams {
            context: format!("t_max must be positive (got {t_max})"),
        });
    }
    if samples < 2 {
        return Err(SemigroupError::BadParams {
            context: format!("need at least 2 samples (got {samples})"),
        });
    }
    let omega = spectral_abscissa(&spec.a)? + OMEGA_SAFEGUARD;
    let mut m = 1.0f64;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let tn = evaluate_t(spec, t)?.norm_2();
        m = m.max(tn * (-omega * t).exp());
    }
    Ok(GrowthBound { m, omega })
}

/// Norms of `T(t) x` along an increasing nonnegative grid.
pub fn trajectory(
    spec: &GeneratorSpec,
    x: &CVector,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>, SemigroupError> {
    if grid.iter().any(|&t| !(t >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SemigroupError::BadGrid);
    }
    if x.len() != spec.dim() {
        return Err(SemigroupError::BadParams {
            context: format!("vector length {} vs generator dim {}", x.len(), spec.dim()),
        });
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        let tt = evaluate_t(spec, t)?;
        rows.push((t, vec_norm(&tt.mul_vec(x))));
    }
    Ok(rows)
}

/// CSV rendering of a trajectory: header `t,norm`, 17 significant digits.
pub fn trajectory_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("t,norm\n");
    for (t, norm) in rows {
        out.push_str(&format!("{:.16e},{:.16e}\n", t, norm));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array1;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn diag_spec() -> GeneratorSpec {
        GeneratorSpec::new(
            "diag",
            Matrix::diag(&[cx(-1.0, 0.0), cx(-2.0, 0.0)]),
            "diag(-1,-2)",
        )
    }

    fn rotation_spec() -> GeneratorSpec {
        GeneratorSpec::new(
            "rotation",
            Matrix::from_real_rows(2, &[0.0, -1.0, 1.0, 0.0]).unwrap(),
            "planar rotation",
        )
    }

    fn jordan_spec() -> GeneratorSpec {
        GeneratorSpec::new(
            "jordan",
            Matrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap(),
            "J2",
        )
    }

    #[test]
    fn diagonal_semigroup_value() {
        let t1 = evaluate_t(&diag_spec(), 1.0).unwrap();
        let expect = Matrix::diag(&[cx((-1.0f64).exp(), 0.0), cx((-2.0f64).exp(), 0.0)]);
        assert!(t1.fro_dist(&expect) < 1e-14);
    }

    #[test]
    fn time_zero_is_identity_exactly() {
        for spec in [diag_spec(), rotation_spec(), jordan_spec()] {
            let t0 = evaluate_t(&spec, 0.0).unwrap();
            assert_eq!(t0.fro_dist(&Matrix::identity(2)), 0.0);
        }
    }

    #[test]
    fn unipotent_semigroup_value() {
        let t2 = evaluate_t(&jordan_spec(), 2.0).unwrap();
        let expect = Matrix::from_real_rows(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(t2.fro_dist(&expect) < 1e-13);
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(matches!(
            evaluate_t(&diag_spec(), -1.0),
            Err(SemigroupError::NegativeTime { .. })
        ));
    }

    #[test]
    fn horizon_guard_triggers() {
        let spec = GeneratorSpec::new("big", Matrix::diag(&[cx(-600.0, 0.0)]), "");
        assert!(matches!(
            evaluate_t(&spec, 2.0),
            Err(SemigroupError::TimeHorizon { .. })
        ));
    }

    #[test]
    fn cocycle_identity_holds() {
        for spec in [diag_spec(), rotation_spec(), jordan_spec()] {
            for (t, s) in [(0.3, 1.7), (2.5, 2.5), (0.0, 4.0), (1.0, 0.25)] {
                let lhs = evaluate_t(&spec, t + s).unwrap();
                let rhs = evaluate_t(&spec, t).unwrap().matmul(&evaluate_t(&spec, s).unwrap());
                assert!(
                    lhs.fro_dist(&rhs) <= 1e-8 * (1.0 + lhs.norm_2()),
                    "cocycle failed for {} at t={t}, s={s}",
                    spec.name
                );
            }
        }
    }

    #[test]
    fn strong_continuity_surrogate_is_monotone() {
        for spec in [diag_spec(), rotation_spec(), jordan_spec()] {
            let x = Array1::from_shape_fn(2, |i| cx(1.0 - 0.3 * i as f64, 0.4));
            let xn = vec_norm(&x);
            let mut prev = f64::INFINITY;
            for k in 0..=20 {
                let h = 0.5f64.powi(k);
                let th = evaluate_t(&spec, h).unwrap();
                let dev = vec_norm(&(&th.mul_vec(&x) - &x));
                assert!(
                    dev <= prev * (1.0 + 1e-12) + 1e-14 * xn,
                    "‖T(h)x−x‖ not monotone for {} at h={h}",
                    spec.name
                );
                prev = dev;
            }
            assert!(prev <= 1e-5 * xn);
        }
    }

    #[test]
    fn growth_bounds_match_structure() {
        let gb = growth_bound(&diag_spec(), 5.0, 41).unwrap();
        assert!((gb.omega + 1.0).abs() < 1e-8);
        assert!((gb.m - 1.0).abs() < 1e-9);

        let gb = growth_bound(&rotation_spec(), 5.0, 41).unwrap();
        assert!(gb.omega.abs() < 1e-8);
        assert!((gb.m - 1.0).abs() < 1e-9);

        // Sampled oracle for the unipotent case: max of the closed form
        // ||[[1,t],[0,1]]|| e^{-omega t} over the same grid.
        let gb = growth_bound(&jordan_spec(), 5.0, 41).unwrap();
        let mut expect = 1.0f64;
        for k in 0..41 {
            let t = 5.0 * k as f64 / 40.0;
            let tn = Matrix::from_real_rows(2, &[1.0, t, 0.0, 1.0]).unwrap().norm_2();
            expect = expect.max(tn * (-gb.omega * t).exp());
        }
        assert!((gb.m - expect).abs() <= 1e-9 * expect);
    }

    #[test]
    fn growth_bound_envelope_holds_on_refinement() {
        for spec in [diag_spec(), rotation_spec(), jordan_spec()] {
            let gb = growth_bound(&spec, 4.0, 33).unwrap();
            for k in 0..129 {
                let t = 4.0 * k as f64 / 128.0;
                let tn = evaluate_t(&spec, t).unwrap().norm_2();
                assert!(
                    tn <= gb.m * (gb.omega * t).exp() * (1.0 + 1e-6),
                    "envelope violated for {} at t={t}",
                    spec.name
                );
            }
        }
    }

    #[test]
    fn trajectory_values_and_csv_format() {
        let spec = diag_spec();
        let x = Array1::from_vec(vec![cx(1.0, 0.0), cx(0.0, 0.0)]);
        let rows = trajectory(&spec, &x, &[0.0, 1.0, 2.0]).unwrap();
        let expect = [1.0, (-1.0f64).exp(), (-2.0f64).exp()];
        for ((_, n), e) in rows.iter().zip(expect.iter()) {
            assert!((n - e).abs() < 1e-14);
        }

        let rot = rotation_spec();
        let rows = trajectory(&rot, &x, &[0.0, 0.7, 1.9, 3.2]).unwrap();
        for (_, n) in &rows {
            assert!((n - 1.0).abs() < 1e-13);
        }

        // Unipotent action: T(10) e2 = (10, 1).
        let j = jordan_spec();
        let e2 = Array1::from_vec(vec![cx(0.0, 0.0), cx(1.0, 0.0)]);
        let rows = trajectory(&j, &e2, &[0.0, 10.0]).unwrap();
        assert!((rows[0].1 - 1.0).abs() < 1e-14);
        assert!((rows[1].1 - 101.0f64.sqrt()).abs() < 1e-12);

        let csv = trajectory_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,norm"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.0000000000000000e0,"));
    }

    #[test]
    fn monotone_grid_is_required() {
        let spec = diag_spec();
        let x = Array1::from_vec(vec![cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert!(matches!(
            trajectory(&spec, &x, &[0.0, 2.0, 1.0]),
            Err(SemigroupError::BadGrid)
        ));
        assert!(matches!(
            trajectory(&spec, &x, &[-1.0, 0.0]),
            Err(SemigroupError::BadGrid)
        ));
    }
}
