//! End-to-end synthesis pipelines.
//!
//! * [`synthesize_numeric`]: snap the spectrum of an inverse-eigenmode chain
//!   and rebuild it by Lanczos. Accurate to `O(ε²)` but slow (`t₀ = 2π/ε`).
//! * [`hahn_chain`]: closed-form chains with the fastest spectrum
//!   `{0, ±(k + α + ½)}`, `t₀ = 2π`, but a fixed zero mode.
//! * [`refine_isospectral`]: steer the zero mode of such a chain towards a
//!   target while keeping its spectrum.

mod hahn;
mod numeric;
mod phases;
mod potential;
mod refine;

use crate::{evolution, ChainSpec, EigenSystem, EtaVector, Result, StateVector};

pub use hahn::{hahn_chain, hahn_matrix, hahn_spectrum, zero_mode, HahnParameters};
pub use numeric::synthesize_numeric;
pub use phases::{phase_corrections, recombine};
pub use potential::{fix_coupling_signs, residual_potential, residual_potential_masked};
pub use refine::{refine_isospectral, RefineConfig};

/// Outcome of a synthesis run.
///
/// The chain maps `|start_site⟩` to `−|α⟩` at `t0`, where `α` is the target
/// magnitude vector implied by `eta_target` (phases are applied afterwards
/// through `phase_corrections`).
#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub chain: ChainSpec,
    pub t0: f64,
    pub start_site: usize,
    pub eta_target: EtaVector,
    /// Zero-eigenvalue eigenvector of `chain`, signed to overlap positively
    /// with `eta_target`.
    pub eta_actual: Vec<f64>,
    /// `|⟨η_target|η_actual⟩|`.
    pub eigen_overlap_f: f64,
    /// `|⟨α|e^{−iHt₀}|k⟩|`.
    pub state_fidelity: f64,
    pub epsilon: f64,
    pub iterations: usize,
    /// `J_max·t₀/π`, the dimensionless speed figure.
    pub jmax_t0: f64,
    /// Largest deviation of the chain's (or any iterate's) spectrum from the
    /// intended one.
    pub spectral_deviation: f64,
    /// `Arg(α_n)` to be applied as local `R_Z` rotations after evolution.
    pub phase_corrections: Vec<f64>,
    pub warnings: Vec<String>,
}

impl SynthesisReport {
    /// Target magnitudes `|k⟩ − 2η_k η` the chain was built for.
    pub fn target(&self) -> Vec<f64> {
        self.eta_target.implied_target(self.start_site)
    }

    /// Recompute the state fidelity from the stored chain.
    pub fn recompute_fidelity(&self) -> Result<f64> {
        let alpha = StateVector::from_real(&self.target())?;
        crate::diagnostics::fidelity(&self.chain, self.start_site, self.t0, &alpha)
    }
}

/// Assemble a report for `chain` given the index of its zero eigenvalue.
pub(crate) fn build_report(
    chain: ChainSpec,
    eig: &EigenSystem,
    zero_index: usize,
    eta: &EtaVector,
    start_site: usize,
    epsilon: f64,
    iterations: usize,
) -> SynthesisReport {
    let mut eta_actual = eig.vector(zero_index);
    let dot: f64 = eta_actual.iter().zip(eta.entries()).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        eta_actual.iter_mut().for_each(|x| *x = -*x);
    }
    let t0 = 2.0 * std::f64::consts::PI / epsilon;
    let target = eta.implied_target(start_site);
    let psi = evolution::evolve_site(eig, start_site, t0);
    let overlap: num_complex::Complex64 = psi.iter().zip(&target).map(|(p, a)| *p * *a).sum();
    let jmax_t0 = chain.max_coupling() * t0 / std::f64::consts::PI;
    SynthesisReport {
        chain,
        t0,
        start_site,
        eta_target: eta.clone(),
        eigen_overlap_f: dot.abs().min(1.0),
        eta_actual,
        state_fidelity: overlap.norm().min(1.0),
        epsilon,
        iterations,
        jmax_t0,
        spectral_deviation: 0.0,
        phase_corrections: vec![0.0; eta.len()],
        warnings: Vec::new(),
    }
}
