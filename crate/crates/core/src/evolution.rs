//! Exact time evolution `e^{−iHt}` through the eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{eigendecompose, ChainSpec, EigenSystem, Error, Result, StateVector};

/// Evolve `initial` for time `t` under `chain`.
pub fn evolve(chain: &ChainSpec, initial: &StateVector, t: f64) -> Result<StateVector> {
    check_len(chain.len(), initial.len())?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let eig = eigendecompose(chain)?;
    Ok(evolve_with(&eig, initial, t))
}

/// `U e^{−iΛt} Uᵀ ψ` for a precomputed decomposition.
pub fn evolve_with(eig: &EigenSystem, initial: &StateVector, t: f64) -> StateVector {
    if t == 0.0 {
        return initial.clone();
    }
    let u = eig.vectors();
    let n = eig.len();
    let psi = initial.amplitudes();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|m| {
            let proj: Complex64 = (0..n).map(|i| psi[i] * u[(i, m)]).sum();
            proj * Complex64::from_polar(1.0, -eig.values()[m] * t)
        })
        .collect();
    let out = (0..n)
        .map(|i| (0..n).map(|m| coeffs[m] * u[(i, m)]).sum())
        .collect();
    StateVector::from_raw(out)
}

/// `e^{−iHt}|site⟩`, i.e. column `site` of the propagator.
pub fn evolve_site(eig: &EigenSystem, site: usize, t: f64) -> Vec<Complex64> {
    let n = eig.len();
    if t == 0.0 {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[site] = Complex64::new(1.0, 0.0);
        return out;
    }
    let u = eig.vectors();
    let phases: Vec<Complex64> = eig
        .values()
        .iter()
        .map(|l| Complex64::from_polar(1.0, -l * t))
        .collect();
    (0..n)
        .map(|i| (0..n).map(|m| phases[m] * u[(i, m)] * u[(site, m)]).sum())
        .collect()
}

/// The full propagator `e^{−iHt}` as a dense complex matrix.
pub fn propagator(eig: &EigenSystem, t: f64) -> DMatrix<Complex64> {
    let n = eig.len();
    let u = eig.vectors().map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        eig.values().iter().map(|l| Complex64::from_polar(1.0, -l * t)),
    ));
    &u * phases * u.transpose()
}

/// Site occupation probabilities on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `probabilities[i][n] = |⟨n|ψ(times[i])⟩|²`.
    pub probabilities: Vec<Vec<f64>>,
}

impl EvolutionTrace {
    pub fn sites(&self) -> usize {
        self.probabilities.first().map_or(0, Vec::len)
    }
}

/// Occupation probabilities of `e^{−iHt}|start_site⟩` at each time in `times`.
pub fn evolution_trace(chain: &ChainSpec, start_site: usize, times: &[f64]) -> Result<EvolutionTrace> {
    if start_site >= chain.len() {
        return Err(Error::SiteOutOfRange {
            site: start_site,
            len: chain.len(),
        });
    }
    if times.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be finite and strictly increasing".into(),
        ));
    }
    let eig = eigendecompose(chain)?;
    let probabilities = times
        .iter()
        .map(|&t| {
            evolve_site(&eig, start_site, t)
                .iter()
                .map(|a| a.norm_sqr().min(1.0))
                .collect()
        })
        .collect();
    Ok(EvolutionTrace {
        times: times.to_vec(),
        probabilities,
    })
}

/// `steps` evenly spaced points from `start` to `end` inclusive; a single
/// point when `start == end`.
pub fn linear_grid(start: f64, end: f64, steps: usize) -> Result<Vec<f64>> {
    if !start.is_finite() || !end.is_finite() || end < start {
        return Err(Error::InvalidArgument(format!(
            "invalid grid [{start}, {end}]"
        )));
    }
    if start == end {
        return Ok(vec![start]);
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(
            "a grid over a nonempty interval needs at least 2 steps".into(),
        ));
    }
    let h = (end - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { end } else { start + h * i as f64 })
        .collect())
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}
