use crate::inverse::{auto_epsilon, eta_from_target, inverse_eigenmode, lanczos_reconstruct, snap_spectrum};
use crate::{eigendecompose, Error, Result, StateVector};

use super::{build_report, phase_corrections, SynthesisReport};

/// Numeric synthesis of `alpha` from `|k⟩`.
///
/// `η` is made the zero mode of a chain with unit couplings, the remaining
/// eigenvalues are snapped to odd multiples of `ε/2` and the chain is rebuilt
/// by Lanczos from the snapped spectrum and the original first components.
/// The result reaches fidelity `1 − O(ε²)` at `t₀ = 2π/ε`.
///
/// `k` defaults to the site with the largest amplitude; `epsilon` defaults to
/// (and falls back to) [`auto_epsilon`]'s choice.
pub fn synthesize_numeric(
    alpha: &StateVector,
    k: Option<usize>,
    epsilon: Option<f64>,
) -> Result<SynthesisReport> {
    let (mags, phases) = phase_corrections(alpha);
    let k = match k {
        Some(k) if k >= mags.len() => {
            return Err(Error::SiteOutOfRange {
                site: k,
                len: mags.len(),
            })
        }
        Some(k) => k,
        None => mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty target"),
    };
    let eta = eta_from_target(&mags, k)?;
    let h_eta = inverse_eigenmode(&eta, None)?;
    let eig = eigendecompose(&h_eta)?;
    let choice = auto_epsilon(eig.values(), epsilon)?;
    let spectrum = snap_spectrum(eig.values(), choice.epsilon)?;
    let rebuilt = lanczos_reconstruct(spectrum.values(), &eig.first_components())?;
    // Lanczos yields positive couplings; restore the sign pattern of H_η
    // (relevant where a zero η entry forced a negative coupling).
    let gauge = rebuilt.gauge_to_pattern(h_eta.couplings())?;
    let chain = rebuilt.apply_sign_gauge(&gauge)?;

    let final_eig = eigendecompose(&chain)?;
    let mut report = build_report(
        chain,
        &final_eig,
        spectrum.zero_index(),
        &eta,
        k,
        choice.epsilon,
        0,
    );
    report.spectral_deviation = final_eig
        .values()
        .iter()
        .zip(spectrum.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    report.phase_corrections = phases;
    if choice.fallback {
        report.warnings.push(format!(
            "requested epsilon rejected (must be below half the smallest gap); using {}",
            choice.epsilon
        ));
    }
    Ok(report)
}
