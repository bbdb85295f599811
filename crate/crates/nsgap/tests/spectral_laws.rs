//! Spectrum transport laws: matrix powers, lazy averaging, and the
//! anti-diagonal block construction act on eigenvalues exactly as the
//! closed forms say.

mod common;

use common::stochastic;
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn multiset_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && sorted(a.to_vec())
            .iter()
            .zip(sorted(b.to_vec()))
            .all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn powers_raise_the_spectrum_elementwise(
        a in (2usize..=5).prop_flat_map(stochastic),
        m in 1u32..=4,
    ) {
        let base = a.eigenvalues();
        let powered = a.power(m).eigenvalues();
        let expected: Vec<f64> = base.iter().map(|l| l.powi(m as i32)).collect();
        prop_assert!(
            multiset_close(&powered, &expected, 1e-8),
            "{powered:?} vs {expected:?}"
        );
    }

    #[test]
    fn lazy_averaging_shifts_the_spectrum(a in (2usize..=5).prop_flat_map(stochastic)) {
        let shifted: Vec<f64> = a.eigenvalues().iter().map(|l| (1.0 + l) / 2.0).collect();
        prop_assert!(multiset_close(&a.lazy().eigenvalues(), &shifted, 1e-9));
    }

    #[test]
    fn block_antidiagonal_mirrors_the_spectrum(a in (2usize..=5).prop_flat_map(stochastic)) {
        let mut mirrored = a.eigenvalues();
        mirrored.extend(a.eigenvalues().iter().map(|l| -l));
        prop_assert!(multiset_close(
            &a.block_antidiagonal().eigenvalues(),
            &mirrored,
            1e-8
        ));
    }
}
