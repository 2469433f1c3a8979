use std::fmt;

use crate::{Error, Result};

/// Entries with magnitude below this are treated as exact zeros.
pub const ETA_ZERO_THRESHOLD: f64 = 1e-12;

const NORM_TOLERANCE: f64 = 1e-12;

/// Why a vector cannot be the zero-eigenvalue eigenvector of a Jacobi matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum EtaViolation {
    TooShort { len: usize },
    NonFinite { site: usize },
    NotNormalized { norm: f64 },
    FirstEntryZero,
    LastEntryZero,
    /// Entries `site` and `site + 1` are both zero.
    ConsecutiveZeros { site: usize },
}

impl fmt::Display for EtaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooShort { len } => write!(f, "vector has {len} entries, need at least 2"),
            Self::NonFinite { site } => write!(f, "entry at site {} is not finite", site + 1),
            Self::NotNormalized { norm } => write!(f, "vector is not normalized (norm {norm})"),
            Self::FirstEntryZero => write!(f, "first entry is zero"),
            Self::LastEntryZero => write!(f, "last entry is zero"),
            Self::ConsecutiveZeros { site } => write!(
                f,
                "consecutive zeros at sites {} and {}",
                site + 1,
                site + 2
            ),
        }
    }
}

/// Check the necessary conditions for `eta` to be an eigenvector of a Jacobi
/// matrix: unit norm, nonzero end entries and no two adjacent zeros.
pub fn validate_eta(eta: &[f64]) -> Vec<EtaViolation> {
    let mut out = Vec::new();
    if eta.len() < 2 {
        out.push(EtaViolation::TooShort { len: eta.len() });
        return out;
    }
    if let Some(site) = eta.iter().position(|x| !x.is_finite()) {
        out.push(EtaViolation::NonFinite { site });
        return out;
    }
    let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        out.push(EtaViolation::NotNormalized { norm });
    }
    let zero = |x: f64| x.abs() < ETA_ZERO_THRESHOLD;
    if zero(eta[0]) {
        out.push(EtaViolation::FirstEntryZero);
    }
    if zero(eta[eta.len() - 1]) {
        out.push(EtaViolation::LastEntryZero);
    }
    for (site, w) in eta.windows(2).enumerate() {
        if zero(w[0]) && zero(w[1]) {
            out.push(EtaViolation::ConsecutiveZeros { site });
        }
    }
    out
}

/// A validated zero-eigenvalue target eigenvector.
///
/// Entries below [`ETA_ZERO_THRESHOLD`] are stored as exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaVector {
    entries: Vec<f64>,
}

impl EtaVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let violations = validate_eta(&entries);
        if !violations.is_empty() {
            return Err(Error::InfeasibleEta(violations));
        }
        let entries = entries
            .into_iter()
            .map(|x| if x.abs() < ETA_ZERO_THRESHOLD { 0.0 } else { x })
            .collect();
        Ok(Self { entries })
    }

    /// Normalise first, then validate.
    pub fn normalized(entries: Vec<f64>) -> Result<Self> {
        let norm = entries.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(entries.into_iter().map(|x| x / norm).collect())
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_zeros(&self) -> bool {
        self.entries.contains(&0.0)
    }

    pub fn negated(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// `|ηᵀ v|` for a real vector `v`.
    pub fn overlap(&self, v: &[f64]) -> f64 {
        self.entries.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs()
    }

    /// The state the ideal reflection produces from `|site⟩`:
    /// `|site⟩ − 2η_site η`, equal to `α` when `η` came from `(α, site)`.
    pub fn implied_target(&self, site: usize) -> Vec<f64> {
        let c = 2.0 * self.entries[site];
        let mut out: Vec<f64> = self.entries.iter().map(|x| -c * x).collect();
        out[site] += 1.0;
        out
    }
}

/// Reduce a real non-negative target `α` and start site `k` to the reflection
/// vector `η = (|k⟩ − |α⟩)/√(2(1 − α_k))`.
pub fn eta_from_target(alpha: &[f64], k: usize) -> Result<EtaVector> {
    let n = alpha.len();
    if k >= n {
        return Err(Error::SiteOutOfRange { site: k, len: n });
    }
    let norm = alpha.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    if alpha.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidArgument(
            "target amplitudes must be real and non-negative; split phases first".into(),
        ));
    }
    let gap = 1.0 - alpha[k];
    if gap <= ETA_ZERO_THRESHOLD {
        return Err(Error::BasisTarget);
    }
    let scale = (2.0 * gap).sqrt();
    let mut entries: Vec<f64> = alpha.iter().map(|a| -a / scale).collect();
    entries[k] = gap / scale;
    EtaVector::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reflect(eta: &[f64], k: usize) -> Vec<f64> {
        // −(I − 2ηηᵀ)|k⟩
        let mut out: Vec<f64> = eta.iter().map(|x| 2.0 * eta[k] * x).collect();
        out[k] -= 1.0;
        out
    }

    #[test]
    fn basis_target_is_rejected() {
        assert!(matches!(
            eta_from_target(&[1.0, 0.0, 0.0], 0),
            Err(Error::BasisTarget)
        ));
    }

    #[test]
    fn two_site_example() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let eta = eta_from_target(&[h, h], 0).unwrap();
        assert!((eta.entries()[0] - 0.382_683_432_365_089_8).abs() < 1e-12);
        assert!((eta.entries()[1] + 0.923_879_532_511_286_7).abs() < 1e-12);
    }

    #[test]
    fn w5_example_and_reflection() {
        let a = 1.0 / 5f64.sqrt();
        let alpha = [a; 5];
        let eta = eta_from_target(&alpha, 0).unwrap();
        let denom = (2.0 * (1.0 - a)).sqrt();
        assert!((eta.entries()[0] - (1.0 - a) / denom).abs() < 1e-15);
        for x in &eta.entries()[1..] {
            assert!((x + a / denom).abs() < 1e-15);
        }
        let r = reflect(eta.entries(), 0);
        for (x, y) in r.iter().zip(&alpha) {
            assert!((x + y).abs() < 1e-12);
        }
        assert!(((eta.entries()[0]) - ((1.0 - a) / 2.0).sqrt()).abs() < 1e-15);
        let back = eta.implied_target(0);
        for (x, y) in back.iter().zip(&alpha) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn violations() {
        let s3 = 1.0 / 3f64.sqrt();
        assert!(validate_eta(&[s3, s3, s3]).is_empty());
        assert_eq!(validate_eta(&[0.0, 1.0, 0.0]), vec![
            EtaViolation::FirstEntryZero,
            EtaViolation::LastEntryZero
        ]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(validate_eta(&[h, 0.0, 0.0, h]), vec![EtaViolation::ConsecutiveZeros {
            site: 1
        }]);
        assert!(matches!(
            validate_eta(&[1.0, 1.0])[0],
            EtaViolation::NotNormalized { .. }
        ));
    }

    #[test]
    fn consecutive_zero_target_is_infeasible() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let err = eta_from_target(&[h, 0.0, 0.0, h], 0).unwrap_err();
        match err {
            Error::InfeasibleEta(v) => {
                assert!(v.contains(&EtaViolation::ConsecutiveZeros { site: 1 }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
