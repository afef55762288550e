//! Every zoo entry's declared facts hold: spectra within 1e-8 of the
//! closed forms, stability classes as promised, and file round-trips
//! reproduce the matrices bitwise.

use semispec_core::linalg::{eig_decompose, spectral_abscissa, Cx, DEFAULT_CLUSTER_TOL};
use semispec_core::stability::{strong_stability_check, uniform_stability_check};
use semispec_core::zoo::canonical_zoo;

#[test]
fn declared_spectra_match_eigendecomposition() {
    for entry in canonical_zoo() {
        let Some(expected) = &entry.expected.spectrum else {
            continue;
        };
        let decomp = eig_decompose(&entry.spec.a, DEFAULT_CLUSTER_TOL).unwrap();
        // Expand clusters by multiplicity and compare as sorted multisets.
        let mut got: Vec<Cx> = decomp
            .clusters
            .iter()
            .flat_map(|c| std::iter::repeat(c.eigenvalue).take(c.multiplicity))
            .collect();
        let mut want = expected.clone();
        let key = |z: &Cx| (z.re, z.im);
        got.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        want.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        assert_eq!(got.len(), want.len(), "{}", entry.spec.name);
        let tol = 1e-8 * (1.0 + entry.spec.a.norm_2());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!(
                (g - w).norm() <= tol,
                "{}: eigenvalue {} vs declared {}",
                entry.spec.name,
                g,
                w
            );
        }
    }
}

#[test]
fn random_stable_entry_sits_at_abscissa_minus_one() {
    let entry = canonical_zoo()
        .into_iter()
        .find(|e| e.spec.name == "randomStable")
        .unwrap();
    let abscissa = spectral_abscissa(&entry.spec.a).unwrap();
    assert!((abscissa + 1.0).abs() < 1e-9);
}

#[test]
fn declared_stability_classes_hold() {
    for entry in canonical_zoo() {
        let strong = strong_stability_check(&entry.spec, &[], None).unwrap();
        assert_eq!(
            strong.criterion_holds, entry.expected.strongly_stable,
            "strong class mismatch for {}",
            entry.spec.name
        );
        assert!(
            strong.simulation_agrees,
            "strong simulation mismatch for {}",
            entry.spec.name
        );

        let uniform = uniform_stability_check(&entry.spec, 1.0, &[]).unwrap();
        assert_eq!(
            uniform.criterion_holds, entry.expected.uniformly_stable,
            "uniform class mismatch for {}",
            entry.spec.name
        );
        assert!(
            uniform.simulation_agrees,
            "uniform simulation mismatch for {}",
            entry.spec.name
        );
    }
}
