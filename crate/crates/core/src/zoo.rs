//! Curated example generators with machine-checkable expected facts, so
//! every verifier runs against a reproducible corpus.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{spectral_abscissa, Cx, Matrix};
use crate::semigroup::GeneratorSpec;

#[derive(Debug, thiserror::Error)]
pub enum ZooError {
    #[error("unknown generator name '{name}'")]
    UnknownName { name: String },
    #[error("invalid parameters for '{name}': {context}")]
    InvalidParams { name: String, context: String },
}

/// A zoo member: the generator plus everything we promise about it.
#[derive(Debug, Clone)]
pub struct ZooEntry {
    pub spec: GeneratorSpec,
    pub expected: ExpectedFacts,
}

/// Facts asserted by the corpus tests.
#[derive(Debug, Clone)]
pub struct ExpectedFacts {
    /// Closed-form spectrum with multiplicity, when known.
    pub spectrum: Option<Vec<Cx>>,
    pub strongly_stable: bool,
    pub uniformly_stable: bool,
}

/// Parsed builtin generator selector.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Diagonal { eigenvalues: Vec<Cx> },
    Jordan { dim: usize, eigenvalue: Cx },
    NilpotentShift { dim: usize },
    Rotation,
    AliasPair,
    TruncatedLeftShift { dim: usize },
    Heat1d { n: usize },
    Transport1d { n: usize },
    RandomStable { dim: usize, seed: u64 },
    RandomNonNormal { dim: usize, seed: u64 },
}

/// Parse one `re` or `re:im` token.
pub fn parse_complex(token: &str) -> Result<Cx, String> {
    let mut parts = token.splitn(2, ':');
    let re = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad real part in '{token}': {e}"))?;
    let im = match parts.next() {
        Some(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad imaginary part in '{token}': {e}"))?,
        None => 0.0,
    };
    Ok(Cx::new(re, im))
}

impl Builtin {
    /// Parse `name[:args]` where args are comma-separated `re[:im]` tokens
    /// or integers, depending on the generator.
    pub fn parse(s: &str) -> Result<Builtin, ZooError> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, a),
            None => (s, ""),
        };
        let tokens: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').collect()
        };
        let bad = |context: String| ZooError::InvalidParams {
            name: name.to_string(),
            context,
        };
        let int_arg = |idx: usize, default: Option<usize>| -> Result<usize, ZooError> {
            match tokens.get(idx) {
                Some(tok) => tok
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| bad(format!("expected integer, got '{tok}': {e}"))),
                None => default.ok_or_else(|| bad(format!("missing argument {idx}"))),
            }
        };
        match name {
            "diag" | "diagonal" => {
                if tokens.is_empty() {
                    return Err(bad("need at least one eigenvalue".into()));
                }
                let eigenvalues = tokens
                    .iter()
                    .map(|t| parse_complex(t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(bad)?;
                Ok(Builtin::Diagonal { eigenvalues })
            }
            "jordan" => {
                let dim = int_arg(0, None)?;
                if dim == 0 {
                    return Err(bad("dimension must be positive".into()));
                }
                let eigenvalue = match tokens.get(1) {
                    Some(t) => parse_complex(t).map_err(bad)?,
                    None => Cx::new(0.0, 0.0),
                };
                Ok(Builtin::Jordan { dim, eigenvalue })
            }
            "nilpotentShift" => Ok(Builtin::NilpotentShift {
                dim: int_arg(0, Some(4))?,
            }),
            "rotation" => Ok(Builtin::Rotation),
            "aliasPair" => Ok(Builtin::AliasPair),
            "truncatedLeftShift" => Ok(Builtin::TruncatedLeftShift {
                dim: int_arg(0, Some(8))?,
            }),
            "heat1d" => Ok(Builtin::Heat1d {
                n: int_arg(0, Some(8))?,
            }),
            "transport1d" => Ok(Builtin::Transport1d {
                n: int_arg(0, Some(8))?,
            }),
            "randomStable" => Ok(Builtin::RandomStable {
                dim: int_arg(0, Some(6))?,
                seed: int_arg(1, Some(24243))? as u64,
            }),
            "randomNonNormal" => Ok(Builtin::RandomNonNormal {
                dim: int_arg(0, Some(5))?,
                seed: int_arg(1, Some(7011))? as u64,
            }),
            other => Err(ZooError::UnknownName {
                name: other.to_string(),
            }),
        }
    }

    /// Deterministic construction of the generator.
    pub fn build(&self) -> Result<GeneratorSpec, ZooError> {
        match self {
            Builtin::Diagonal { eigenvalues } => Ok(GeneratorSpec::new(
                "diagonal",
                Matrix::diag(eigenvalues),
                format!("diagonal with {} eigenvalues", eigenvalues.len()),
            )),
            Builtin::Jordan { dim, eigenvalue } => {
                let (n, l) = (*dim, *eigenvalue);
                Ok(GeneratorSpec::new(
                    "jordan",
                    Matrix::from_fn(n, |i, j| {
                        if i == j {
                            l
                        } else if j == i + 1 {
                            Cx::new(1.0, 0.0)
                        } else {
                            Cx::new(0.0, 0.0)
                        }
                    }),
                    format!("{n}x{n} Jordan block at {l}"),
                ))
            }
            Builtin::NilpotentShift { dim } => {
                let n = *dim;
                Ok(GeneratorSpec::new(
                    "nilpotentShift",
                    Matrix::from_fn(n, |i, j| {
                        if i == j + 1 {
                            Cx::new(1.0, 0.0)
                        } else {
                            Cx::new(0.0, 0.0)
                        }
                    }),
                    format!("{n}x{n} nilpotent lower shift"),
                ))
            }
            Builtin::Rotation => Ok(GeneratorSpec::new(
                "rotation",
                Matrix::from_real_rows(2, &[0.0, -1.0, 1.0, 0.0]).expect("fixed"),
                "planar rotation generator, spectrum {i, -i}",
            )),
            Builtin::AliasPair => Ok(GeneratorSpec::new(
                "aliasPair",
                Matrix::diag(&[Cx::new(0.0, 0.0), Cx::new(0.0, 2.0 * std::f64::consts::PI)]),
                "diag(0, 2*pi*i): eigenvalues alias under t = 1 exponentiation",
            )),
            Builtin::TruncatedLeftShift { dim } => {
                let n = *dim;
                Ok(GeneratorSpec::new(
                    "truncatedLeftShift",
                    Matrix::from_fn(n, |i, j| {
                        if j == i + 1 {
                            Cx::new(1.0, 0.0)
                        } else {
                            Cx::new(0.0, 0.0)
                        }
                    }),
                    format!("{n}x{n} truncated left shift"),
                ))
            }
            Builtin::Heat1d { n } => {
                let n = *n;
                if n == 0 {
                    return Err(ZooError::InvalidParams {
                        name: "heat1d".into(),
                        context: "need n >= 1 interior points".into(),
                    });
                }
                let c = ((n + 1) * (n + 1)) as f64;
                Ok(GeneratorSpec::new(
                    "heat1d",
                    Matrix::from_fn(n, |i, j| {
                        if i == j {
                            Cx::new(-2.0 * c, 0.0)
                        } else if i.abs_diff(j) == 1 {
                            Cx::new(c, 0.0)
                        } else {
                            Cx::new(0.0, 0.0)
                        }
                    }),
                    format!("1-D Dirichlet second difference, {n} interior points"),
                ))
            }
            Builtin::Transport1d { n } => {
                let n = *n;
                if n == 0 {
                    return Err(ZooError::InvalidParams {
                        name: "transport1d".into(),
                        context: "need n >= 1 cells".into(),
                    });
                }
                let c = (n + 1) as f64;
                Ok(GeneratorSpec::new(
                    "transport1d",
                    Matrix::from_fn(n, |i, j| {
                        if i == j {
                            Cx::new(-c, 0.0)
                        } else if i == j + 1 {
                            Cx::new(c, 0.0)
                        } else {
                            Cx::new(0.0, 0.0)
                        }
                    }),
                    format!("1-D upwind transport, {n} cells"),
                ))
            }
            Builtin::RandomStable { dim, seed } => {
                let raw = random_complex(*dim, *seed);
                let abscissa =
                    spectral_abscissa(&raw).map_err(|e| ZooError::InvalidParams {
                        name: "randomStable".into(),
                        context: e.to_string(),
                    })?;
                let a = &raw - &Matrix::scaled_identity(*dim, Cx::new(abscissa + 1.0, 0.0));
                Ok(GeneratorSpec::new(
                    "randomStable",
                    a,
                    format!("seeded dense matrix shifted to abscissa -1 (seed {seed})"),
                ))
            }
            Builtin::RandomNonNormal { dim, seed } => {
                let n = *dim;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut gauss = || {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Cx::new(re, im)
                };
                // Planted triangular spectrum: known eigenvalues, strong
                // non-normality from the scaled strict upper part.
                let mut a = Matrix::zeros(n);
                for i in 0..n {
                    let z = gauss();
                    a[(i, i)] = Cx::new(-0.5 - 2.0 * z.re.abs().min(1.0), 0.8 * z.im);
                    for j in (i + 1)..n {
                        a[(i, j)] = gauss() * 2.0;
                    }
                }
                Ok(GeneratorSpec::new(
                    "randomNonNormal",
                    a,
                    format!("seeded triangular with planted stable spectrum (seed {seed})"),
                ))
            }
        }
    }
}

fn random_complex(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    })
}

/// Parse-and-build convenience for CLI-style selectors.
pub fn builtin(selector: &str) -> Result<GeneratorSpec, ZooError> {
    Builtin::parse(selector)?.build()
}

/// The canonical ten-member corpus every sweep runs against. Dimensions
/// are sized so that `t * ||A|| <= 1e3` holds for t up to 3.
pub fn canonical_zoo() -> Vec<ZooEntry> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<ZooEntry>, b: Builtin, expected: ExpectedFacts| {
        out.push(ZooEntry {
            spec: b.build().expect("canonical zoo builders are valid"),
            expected,
        });
    };

    push(
        &mut out,
        Builtin::Diagonal {
            eigenvalues: vec![Cx::new(-1.0, 0.0), Cx::new(-2.0, 0.0)],
        },
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(-1.0, 0.0), Cx::new(-2.0, 0.0)]),
            strongly_stable: true,
            uniformly_stable: true,
        },
    );
    push(
        &mut out,
        Builtin::Jordan {
            dim: 2,
            eigenvalue: Cx::new(0.0, 0.0),
        },
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(0.0, 0.0); 2]),
            strongly_stable: false,
            uniformly_stable: false,
        },
    );
    push(
        &mut out,
        Builtin::NilpotentShift { dim: 4 },
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(0.0, 0.0); 4]),
            strongly_stable: false,
            uniformly_stable: false,
        },
    );
    push(
        &mut out,
        Builtin::Rotation,
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(0.0, -1.0), Cx::new(0.0, 1.0)]),
            strongly_stable: false,
            uniformly_stable: false,
        },
    );
    push(
        &mut out,
        Builtin::AliasPair,
        ExpectedFacts {
            spectrum: Some(vec![
                Cx::new(0.0, 0.0),
                Cx::new(0.0, 2.0 * std::f64::consts::PI),
            ]),
            strongly_stable: false,
            uniformly_stable: false,
        },
    );
    push(
        &mut out,
        Builtin::TruncatedLeftShift { dim: 8 },
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(0.0, 0.0); 8]),
            strongly_stable: false,
            uniformly_stable: false,
        },
    );
    let heat_n = 8usize;
    let c = ((heat_n + 1) * (heat_n + 1)) as f64;
    let heat_spectrum: Vec<Cx> = (1..=heat_n)
        .map(|k| {
            let angle = k as f64 * std::f64::consts::PI / (heat_n as f64 + 1.0);
            Cx::new(-2.0 * c * (1.0 - angle.cos()), 0.0)
        })
        .collect();
    push(
        &mut out,
        Builtin::Heat1d { n: heat_n },
        ExpectedFacts {
            spectrum: Some(heat_spectrum),
            strongly_stable: true,
            uniformly_stable: true,
        },
    );
    push(
        &mut out,
        Builtin::Transport1d { n: 8 },
        ExpectedFacts {
            spectrum: Some(vec![Cx::new(-9.0, 0.0); 8]),
            strongly_stable: true,
            uniformly_stable: true,
        },
    );
    push(
        &mut out,
        Builtin::RandomStable {
            dim: 6,
            seed: 24243,
        },
        ExpectedFacts {
            spectrum: None, // abscissa is -1 by construction; checked separately
            strongly_stable: true,
            uniformly_stable: true,
        },
    );
    push(
        &mut out,
        Builtin::RandomNonNormal { dim: 5, seed: 7011 },
        ExpectedFacts {
            spectrum: None, // planted on the diagonal; checked separately
            strongly_stable: true,
            uniformly_stable: true,
        },
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_decompose, DEFAULT_CLUSTER_TOL};

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn jordan_selector_builds_j2() {
        let spec = builtin("jordan:2").unwrap();
        let expect = Matrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(spec.a.fro_dist(&expect), 0.0);
    }

    #[test]
    fn alias_pair_is_fixed() {
        let spec = builtin("aliasPair").unwrap();
        assert_eq!(spec.dim(), 2);
        assert!((spec.a[(1, 1)] - cx(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-15);
    }

    #[test]
    fn heat1d_matches_closed_form_spectrum() {
        let spec = builtin("heat1d:4").unwrap();
        assert!((spec.a[(0, 0)] - cx(-50.0, 0.0)).norm() < 1e-13);
        assert!((spec.a[(0, 1)] - cx(25.0, 0.0)).norm() < 1e-13);
        let d = eig_decompose(&spec.a, DEFAULT_CLUSTER_TOL).unwrap();
        let mut expect: Vec<f64> = (1..=4)
            .map(|k| -50.0 + 50.0 * (k as f64 * std::f64::consts::PI / 5.0).cos())
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let norm = spec.a.norm_2();
        for (cl, e) in d.clusters.iter().zip(expect.iter()) {
            assert!((cl.eigenvalue - cx(*e, 0.0)).norm() <= 1e-8 * (1.0 + norm));
        }
    }

    #[test]
    fn complex_eigenvalue_tokens_parse() {
        let spec = builtin("diag:-1,0:6.283185307179586").unwrap();
        assert!((spec.a[(1, 1)] - cx(0.0, 6.283185307179586)).norm() < 1e-15);
    }

    #[test]
    fn unknown_names_and_bad_params_error() {
        assert!(matches!(
            builtin("fourier"),
            Err(ZooError::UnknownName { .. })
        ));
        assert!(matches!(
            builtin("jordan:zero"),
            Err(ZooError::InvalidParams { .. })
        ));
        assert!(matches!(builtin("diag"), Err(ZooError::InvalidParams { .. })));
    }

    #[test]
    fn seeded_builders_are_deterministic() {
        let a = builtin("randomStable:6,42").unwrap();
        let b = builtin("randomStable:6,42").unwrap();
        assert_eq!(a.a.fro_dist(&b.a), 0.0);
        let c = builtin("randomStable:6,43").unwrap();
        assert!(a.a.fro_dist(&c.a) > 1e-3);
    }

    #[test]
    fn random_stable_abscissa_is_minus_one() {
        let spec = builtin("randomStable:6,24243").unwrap();
        let abscissa = spectral_abscissa(&spec.a).unwrap();
        assert!((abscissa + 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_non_normal_spectrum_is_planted_diagonal() {
        let spec = builtin("randomNonNormal:5,7011").unwrap();
        let mut planted: Vec<Cx> = (0..5).map(|i| spec.a[(i, i)]).collect();
        planted.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let d = eig_decompose(&spec.a, DEFAULT_CLUSTER_TOL).unwrap();
        let norm = spec.a.norm_2();
        for (cl, p) in d.clusters.iter().zip(planted.iter()) {
            assert!(
                (cl.eigenvalue - p).norm() <= 1e-8 * (1.0 + norm),
                "{} vs planted {}",
                cl.eigenvalue,
                p
            );
        }
        // And it is genuinely non-normal.
        let gram1 = spec.a.adjoint().matmul(&spec.a);
        let gram2 = spec.a.matmul(&spec.a.adjoint());
        assert!(gram1.fro_dist(&gram2) > 1e-2);
    }

    #[test]
    fn zoo_fits_the_time_horizon() {
        for entry in canonical_zoo() {
            let product = 3.0 * entry.spec.a.norm_2();
            assert!(
                product <= 1e3,
                "{} violates the horizon: {product:.1}",
                entry.spec.name
            );
        }
    }
}
