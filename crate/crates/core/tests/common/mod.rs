//! Strategies and property checks shared by the property tests and the
//! acceptance runner.

#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use spinchain::evolution::{evolve_with, evolution_trace};
use spinchain::inverse::{eta_from_target, lanczos_reconstruct, snap_spectrum, validate_eta};
use spinchain::synthesis::{
    fix_coupling_signs, hahn_chain, hahn_spectrum, refine_isospectral, HahnParameters, RefineConfig,
};
use spinchain::{eigendecompose, ChainSpec, EtaVector, StateVector, TargetSpectrum};

pub type Check = Result<(), TestCaseError>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Random chain with couplings bounded away from zero (either sign).
pub fn chain_strategy(max_len: usize) -> impl Strategy<Value = ChainSpec> {
    (2..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(-3.0..3.0f64, n),
            prop::collection::vec((0.2..2.0f64, any::<bool>()), n - 1),
        )
            .prop_map(|(b, j)| {
                let j = j.into_iter().map(|(m, neg)| if neg { -m } else { m }).collect();
                ChainSpec::new(b, j).unwrap()
            })
    })
}

/// Random chain with positive couplings and mild disorder, so that first
/// eigenvector components stay well away from zero up to `N = 50`.
pub fn positive_chain_strategy(max_len: usize) -> impl Strategy<Value = ChainSpec> {
    (2..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(-0.5..0.5f64, n),
            prop::collection::vec(0.7..1.3f64, n - 1),
        )
            .prop_map(|(b, j)| ChainSpec::new(b, j).unwrap())
    })
}

pub fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            StateVector::normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
                .unwrap()
        })
}

pub fn check_round_trip(chain: &ChainSpec) -> Check {
    let es = eigendecompose(chain).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let n = chain.len();
    let scale = chain.norm_bound().max(1.0);
    let u = es.vectors();
    let orth = (u.transpose() * u - nalgebra::DMatrix::<f64>::identity(n, n)).amax();
    ensure(orth <= 1e-10, || format!("UᵀU deviates by {orth:e}"))?;
    let h = chain.to_matrix();
    let lam = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(es.values()));
    let resid = (&h * u - u * lam).amax();
    ensure(resid <= 1e-10 * scale, || format!("HU − UΛ = {resid:e}"))?;
    let rebuilt = es.reconstruct();
    let dev = (rebuilt - h).amax();
    ensure(dev <= 1e-10 * scale, || format!("reconstruction error {dev:e}"))?;
    ensure(es.values().windows(2).all(|w| w[0] < w[1]), || "values not strictly increasing".into())
}

pub fn check_unitarity_and_group_law(chain: &ChainSpec, psi: &StateVector, t1: f64, t2: f64) -> Check {
    let es = eigendecompose(chain).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let a = evolve_with(&es, psi, t1);
    ensure((a.norm() - 1.0).abs() <= 1e-12, || format!("norm {}", a.norm()))?;
    let ab = evolve_with(&es, &a, t2);
    let direct = evolve_with(&es, psi, t1 + t2);
    let dev = ab
        .amplitudes()
        .iter()
        .zip(direct.amplitudes())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    ensure(dev <= 1e-10, || format!("group law deviation {dev:e}"))
}

pub fn check_gauge_invariance(chain: &ChainSpec, signs: &[i8], site: usize) -> Check {
    let gauged = chain.apply_sign_gauge(signs).unwrap();
    let a = eigendecompose(chain).unwrap();
    let b = eigendecompose(&gauged).unwrap();
    let scale = chain.norm_bound().max(1.0);
    let dev = a
        .values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    ensure(dev <= 1e-12 * scale, || format!("spectrum moved by {dev:e}"))?;
    let times = [0.0, 0.3, 1.7, 4.2];
    let ta = evolution_trace(chain, site, &times).unwrap();
    let tb = evolution_trace(&gauged, site, &times).unwrap();
    for (ra, rb) in ta.probabilities.iter().zip(&tb.probabilities) {
        for (x, y) in ra.iter().zip(rb) {
            ensure((x - y).abs() <= 1e-10, || format!("occupation changed {x} vs {y}"))?;
        }
    }
    Ok(())
}

pub fn check_lanczos_right_inverse(chain: &ChainSpec) -> Check {
    let es = eigendecompose(chain).unwrap();
    let back = lanczos_reconstruct(es.values(), &es.first_components())
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let dev = back
        .fields()
        .iter()
        .zip(chain.fields())
        .chain(back.couplings().iter().zip(chain.couplings()))
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    ensure(dev <= 1e-9, || format!("Lanczos round trip error {dev:e} at N = {}", chain.len()))
}

/// `alpha` magnitudes plus a start site; infeasible combinations are skipped.
pub fn check_reflection(mags: &[f64], k: usize) -> Result<bool, TestCaseError> {
    let eta = match eta_from_target(mags, k) {
        Ok(eta) => eta,
        Err(_) => return Ok(false),
    };
    let e = eta.entries();
    ensure(validate_eta(e).is_empty(), || "η failed validation".into())?;
    ensure(
        (e[k] - ((1.0 - mags[k]) / 2.0).sqrt()).abs() <= 1e-12,
        || "⟨η|k⟩ mismatch".into(),
    )?;
    for (i, a) in mags.iter().enumerate() {
        // −(I − 2ηηᵀ)|k⟩ = −|α⟩
        let lhs = 2.0 * e[i] * e[k] - if i == k { 1.0 } else { 0.0 };
        ensure((lhs + a).abs() <= 1e-12, || format!("reflection off at site {i}"))?;
    }
    Ok(true)
}

pub fn check_snap_phases(values: &[f64], epsilon: f64) -> Check {
    let spec = snap_spectrum(values, epsilon).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    for (orig, v) in sorted.iter().zip(spec.values()) {
        ensure((orig - v).abs() <= epsilon / 2.0 + 1e-15, || format!("{orig} moved to {v}"))?;
        let phase = Complex64::from_polar(1.0, -spec.t0() * v);
        let want = if *v == 0.0 { 1.0 } else { -1.0 };
        ensure((phase - want).norm() <= 1e-9, || format!("phase of {v} is {phase}"))?;
    }
    Ok(())
}

/// A short isospectral run from a sign-fixed Hahn chain towards a random `η`;
/// every iterate must keep the target spectrum.
pub fn check_refine_preserves_spectrum(n_half: usize, alpha: f64, eta: &[f64]) -> Check {
    let p = HahnParameters::new(n_half, alpha).unwrap();
    let eta = match EtaVector::normalized(eta.to_vec()) {
        Ok(e) => e,
        Err(_) => return Ok(()),
    };
    let start = fix_coupling_signs(&hahn_chain(p).unwrap(), &eta).unwrap();
    let spec = TargetSpectrum::new(hahn_spectrum(p), 1.0).unwrap();
    let cfg = RefineConfig {
        max_iter: 25,
        polish: false,
        ..RefineConfig::default()
    };
    match refine_isospectral(&start, &eta, &spec, &cfg) {
        Ok(r) => {
            let scale = spec.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            ensure(r.spectral_deviation <= 1e-8 * scale, || {
                format!("spectrum drifted by {:e}", r.spectral_deviation)
            })
        }
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}
