//! Single-excitation state vectors.

use num_complex::Complex64;

use crate::{Error, Result};

/// Normalisation tolerance enforced by [`StateVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Amplitudes `⟨n|ψ⟩` of a state in the one-excitation subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap amplitudes that are already normalised within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// `|site⟩` in a chain of `len` sites.
    pub fn basis(len: usize, site: usize) -> Result<Self> {
        if site >= len {
            return Err(Error::SiteOutOfRange { site, len });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[site] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// The W state `Σ|n⟩/√N`.
    pub fn w_state(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![a; len],
        })
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Site occupation probabilities `|⟨n|ψ⟩|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Real parts, for states known to be real.
    pub fn real_parts(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.re).collect()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.amplitudes.iter().all(|a| a.im.abs() <= tol)
    }
}

fn l2_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(StateVector::from_real(&[1.0, 1.0]).is_err());
        assert!(StateVector::from_real(&[]).is_err());
        let s = StateVector::normalized(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)])
            .unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_and_w() {
        let b = StateVector::basis(4, 2).unwrap();
        assert_eq!(b.probabilities(), vec![0.0, 0.0, 1.0, 0.0]);
        assert!(StateVector::basis(4, 4).is_err());
        let w = StateVector::w_state(5).unwrap();
        assert!((w.inner(&b).norm() - 0.5f64.sqrt() * (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
    }
}
