//! Quality and feasibility metrics for synthesised chains.

mod bounds;
mod estimate;
mod fixture;

use num_complex::Complex64;

use crate::{eigendecompose, evolution, ChainSpec, Error, Result, StateVector};

pub use bounds::{general_speed_bound, symmetric_speed_bound, BoundKind, BoundReport};
pub use estimate::{error_estimate, ErrorEstimate};
pub use fixture::dual_w5_chains;

/// `|⟨α|e^{−iHt₀}|k⟩|`.
pub fn fidelity(chain: &ChainSpec, k: usize, t0: f64, alpha: &StateVector) -> Result<f64> {
    if alpha.len() != chain.len() {
        return Err(Error::DimensionMismatch {
            expected: chain.len(),
            actual: alpha.len(),
        });
    }
    if k >= chain.len() {
        return Err(Error::SiteOutOfRange {
            site: k,
            len: chain.len(),
        });
    }
    let eig = eigendecompose(chain)?;
    let psi = evolution::evolve_site(&eig, k, t0);
    let overlap: Complex64 = alpha
        .amplitudes()
        .iter()
        .zip(&psi)
        .map(|(a, p)| a.conj() * p)
        .sum();
    Ok(overlap.norm().min(1.0))
}

/// Predicted state overlap `1 − 2(1 − α_k)(1 − F)` from the zero-mode overlap
/// `F`.
pub fn state_overlap_estimate(alpha_k: f64, f: f64) -> f64 {
    1.0 - 2.0 * (1.0 - alpha_k) * (1.0 - f)
}

/// `⟨Z₁Z_N⟩ − ⟨Z₁⟩⟨Z_N⟩` for a single-excitation state, `−4|α₁|²|α_N|²`.
pub fn correlation_sigma(state: &StateVector) -> f64 {
    let p = state.probabilities();
    -4.0 * p[0] * p[p.len() - 1]
}

/// Whether `values` has the reflection phase pattern at `t0`: exactly one
/// value within `1e-9` of zero and `|e^{−it₀λ} + 1| ≤ 1e-6` for the others.
pub fn check_phase_pattern(values: &[f64], t0: f64) -> bool {
    if values.iter().filter(|v| v.abs() <= 1e-9).count() != 1 {
        return false;
    }
    values
        .iter()
        .filter(|v| v.abs() > 1e-9)
        .all(|v| (Complex64::from_polar(1.0, -t0 * v) + 1.0).norm() <= 1e-6)
}
