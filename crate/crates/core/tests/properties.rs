mod common;

use common::*;
use proptest::prelude::*;

fn signs(n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigendecompose_round_trip(chain in chain_strategy(40)) {
        check_round_trip(&chain)?;
    }

    #[test]
    fn evolution_is_unitary_with_group_law(
        (chain, psi) in chain_strategy(16).prop_flat_map(|c| {
            let n = c.len();
            (Just(c), state_strategy(n))
        }),
        t1 in -20.0..20.0f64,
        t2 in -20.0..20.0f64,
    ) {
        check_unitarity_and_group_law(&chain, &psi, t1, t2)?;
    }

    #[test]
    fn sign_gauge_is_isospectral(
        (chain, d, site) in chain_strategy(20).prop_flat_map(|c| {
            let n = c.len();
            (Just(c), signs(n), 0..n)
        }),
    ) {
        check_gauge_invariance(&chain, &d, site)?;
    }

    #[test]
    fn lanczos_is_right_inverse(chain in positive_chain_strategy(50)) {
        check_lanczos_right_inverse(&chain)?;
    }

    #[test]
    fn reflection_identity(
        (mags, k) in (2usize..12).prop_flat_map(|n| {
            (prop::collection::vec(0.0..1.0f64, n), 0..n)
        }),
    ) {
        let norm = mags.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let mags: Vec<f64> = mags.iter().map(|x| x / norm).collect();
        let feasible = check_reflection(&mags, k)?;
        prop_assume!(feasible);
    }

    #[test]
    fn snapped_spectrum_has_phase_pattern(
        gaps in prop::collection::vec(0.05..2.0f64, 1..15),
        zero_at in any::<prop::sample::Index>(),
        frac in 0.01..0.99f64,
    ) {
        // build strictly increasing values from gaps, then shift one to zero
        let mut v = vec![0.0];
        for g in &gaps {
            v.push(v.last().unwrap() + g);
        }
        let z = v[zero_at.index(v.len())];
        let v: Vec<f64> = v.iter().map(|x| x - z).collect();
        let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        check_snap_phases(&v, frac * min_gap / 2.0)?;
    }

    #[test]
    fn refinement_preserves_spectrum(
        (n_half, alpha, eta) in (2usize..5, 0u8..3).prop_flat_map(|(n, a)| {
            (Just(n), Just(a as f64), prop::collection::vec(0.2..1.0f64, 2 * n + 1))
        }),
    ) {
        check_refine_preserves_spectrum(n_half, alpha, &eta)?;
    }
}

#[test]
fn eta_sign_flip_leaves_general_bound() {
    use spinchain::diagnostics::general_speed_bound;
    use spinchain::EtaVector;
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(100));
    runner
        .run(
            &(prop::collection::vec(0.05..1.0f64, 3..20), signs(20)),
            |(mags, s)| {
                let eta = EtaVector::normalized(mags.clone()).unwrap();
                let flipped: Vec<f64> = mags.iter().zip(&s).map(|(m, s)| m * f64::from(*s)).collect();
                let a = general_speed_bound(&eta).unwrap().bound_value;
                let b = general_speed_bound(&EtaVector::normalized(flipped).unwrap()).unwrap().bound_value;
                prop_assert!((a - b).abs() <= 1e-12 * a);
                Ok(())
            },
        )
        .unwrap();
}
