//! Matrix exponential by scaling-and-squaring with Padé(13,13).
//!
//! Follows Higham (2005), "The Scaling and Squaring Method for the Matrix
//! Exponential Revisited": scale A by 2^-s until the 1-norm is below
//! theta_13, evaluate the degree-13 Padé approximant, square s times.

use super::matrix::{Cx, Matrix};
use super::LinalgError;

/// theta_13 for IEEE double precision (Higham 2005, Table 2.3).
const THETA_13: f64 = 5.371920351148152;

/// Padé(13,13) numerator coefficients b_0..b_13.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// exp(A) for a square complex matrix.
pub fn expm(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.dim();
    if n == 0 {
        return Ok(Matrix::zeros(0));
    }
    if n == 1 {
        let e = a[(0, 0)].exp();
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(overflow(a));
        }
        return Ok(Matrix::diag(&[e]));
    }

    let norm = a.norm_1();
    if !norm.is_finite() || norm > 1e8 {
        return Err(overflow(a));
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Cx::new(1.0 / f64::powi(2.0, s as i32), 0.0));

    let mut e = pade13(&scaled)?;
    for _ in 0..s {
        e = e.matmul(&e);
    }
    if !e.is_finite() {
        return Err(overflow(a));
    }
    Ok(e)
}

fn overflow(a: &Matrix) -> LinalgError {
    LinalgError::Overflow {
        context: format!(
            "matrix exponential overflowed for norm {:.3e}; rescale the generator or shorten the time step",
            a.norm_1()
        ),
    }
}

fn pade13(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.dim();
    let eye = Matrix::identity(n);
    let c = |k: usize| Cx::new(PADE13[k], 0.0);

    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    // u = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = &(&a6.scale(c(13)) + &a4.scale(c(11))) + &a2.scale(c(9));
    let w2 = &(&(&a6.matmul(&w1) + &a6.scale(c(7))) + &a4.scale(c(5)))
        + &(&a2.scale(c(3)) + &eye.scale(c(1)));
    let u = a.matmul(&w2);

    // v = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = &(&a6.scale(c(12)) + &a4.scale(c(10))) + &a2.scale(c(8));
    let v = &(&(&a6.matmul(&z1) + &a6.scale(c(6))) + &a4.scale(c(4)))
        + &(&a2.scale(c(2)) + &eye.scale(c(0)));

    // (v - u) X = (v + u)
    let num = &v + &u;
    let den = &v - &u;
    den.solve(&num)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn expm_zero_is_identity() {
        let e = expm(&Matrix::zeros(4)).unwrap();
        assert!(e.fro_dist(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn expm_diagonal() {
        let a = Matrix::diag(&[cx(-1.0, 0.0), cx(-2.0, 0.0)]);
        let e = expm(&a).unwrap();
        let expect = Matrix::diag(&[cx((-1.0f64).exp(), 0.0), cx((-2.0f64).exp(), 0.0)]);
        assert!(e.fro_dist(&expect) < 1e-14);
    }

    #[test]
    fn expm_nilpotent_series_terminates() {
        // exp(t J2) = [[1, t], [0, 1]]
        for t in [0.5, 2.0, 10.0] {
            let a = Matrix::from_real_rows(2, &[0.0, t, 0.0, 0.0]).unwrap();
            let e = expm(&a).unwrap();
            let expect = Matrix::from_real_rows(2, &[1.0, t, 0.0, 1.0]).unwrap();
            assert!(e.fro_dist(&expect) < 1e-12 * (1.0 + t));
        }
    }

    #[test]
    fn expm_rotation_is_orthogonal() {
        let t = std::f64::consts::PI / 3.0;
        let a = Matrix::from_real_rows(2, &[0.0, -t, t, 0.0]).unwrap();
        let e = expm(&a).unwrap();
        let expect =
            Matrix::from_real_rows(2, &[t.cos(), -t.sin(), t.sin(), t.cos()]).unwrap();
        assert!(e.fro_dist(&expect) < 1e-14);
    }

    #[test]
    fn expm_commuting_sum_factorizes() {
        // B = polynomial in A commutes with A: exp(A+B) = exp(A) exp(B).
        let a = Matrix::from_fn(4, |i, j| {
            let t = (i * 17 + j * 11) as f64;
            cx((0.8 * t).sin() * 0.6, (1.1 * t).cos() * 0.4)
        });
        let b = &a.matmul(&a).scale(cx(0.3, 0.1)) + &a.scale(cx(-0.5, 0.2));
        let lhs = expm(&(&a + &b)).unwrap();
        let rhs = expm(&a).unwrap().matmul(&expm(&b).unwrap());
        assert!(lhs.fro_dist(&rhs) <= 1e-8 * lhs.norm_fro());
    }

    #[test]
    fn expm_large_norm_scales_accurately() {
        let a = Matrix::diag(&[cx(100.0, 0.0), cx(-100.0, 0.0)]);
        let e = expm(&a).unwrap();
        let e100 = 100.0f64.exp();
        assert!((e[(0, 0)].re - e100).abs() / e100 < 1e-10);
        assert!((e[(1, 1)].re - (-100.0f64).exp()).abs() < 1e-30);
    }

    #[test]
    fn expm_overflow_reports_rescaling_advice() {
        let a = Matrix::diag(&[cx(1e9, 0.0)]);
        match expm(&a) {
            Err(LinalgError::Overflow { context }) => {
                assert!(context.contains("rescale"));
            }
            other => panic!("expected overflow error, got {other:?}"),
        }
    }
}
