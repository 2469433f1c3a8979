use std::f64::consts::PI;

use crate::{Error, EtaVector, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Lower bound on `J_max` for mirror-symmetric chains of length `2N + 1`.
    Symmetric,
    /// Lower bound on `J_max·t₀/π` for a prescribed zero mode `η`.
    General,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Symmetric => "symmetric",
            Self::General => "general",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub bound_value: f64,
    pub achieved: Option<f64>,
    /// `achieved ≥ bound_value − 1e-9`; vacuously true without a value.
    pub satisfied: bool,
    /// Assumption under which the bound holds, if any.
    pub hypothesis: Option<&'static str>,
}

impl BoundReport {
    fn new(kind: BoundKind, bound_value: f64, hypothesis: Option<&'static str>) -> Self {
        Self {
            kind,
            bound_value,
            achieved: None,
            satisfied: true,
            hypothesis,
        }
    }

    /// Attach the value attained by a concrete chain (same units as
    /// `bound_value`).
    pub fn with_achieved(mut self, value: f64) -> Self {
        self.achieved = Some(value);
        self.satisfied = value >= self.bound_value - 1e-9;
        self
    }
}

/// `J_max ≥ (π/(2t₀))·√(N² − ½)` for a chain of `2N + 1` sites.
///
/// Only valid if the Hamiltonian is mirror symmetric; the report carries that
/// hypothesis and a violation on an asymmetric chain means nothing.
pub fn symmetric_speed_bound(n_half: usize, t0: f64) -> BoundReport {
    let n = n_half as f64;
    BoundReport::new(
        BoundKind::Symmetric,
        PI / (2.0 * t0) * (n * n - 0.5).sqrt(),
        Some("mirror-symmetric Hamiltonian: B_n = B_{2N+2-n}, J_n^2 = J_{2N+1-n}^2"),
    )
}

/// Lower bound on `J_max·t₀/π` from `|J_n| ≤ J_max` and the zero-mode rows:
///
/// ```text
/// (J_max t₀/π) · √((2(N−1) + Σ ((|η_{n−1}| + |η_{n+1}|)/η_n)²) / (N(N−1)(N−2))) ≥ 1/√3
/// ```
///
/// with `η₀ = η_{N+1} = 0`.
pub fn general_speed_bound(eta: &EtaVector) -> Result<BoundReport> {
    let e = eta.entries();
    let n = e.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "the general bound needs at least 3 sites, got {n}"
        )));
    }
    if let Some(site) = e.iter().position(|x| *x == 0.0) {
        return Err(Error::ZeroEtaEntry { site });
    }
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            e[i as usize].abs()
        }
    };
    let sum: f64 = (0..n as isize)
        .map(|i| ((at(i - 1) + at(i + 1)) / at(i)).powi(2))
        .sum();
    let nf = n as f64;
    let ratio = (2.0 * (nf - 1.0) + sum) / (nf * (nf - 1.0) * (nf - 2.0));
    Ok(BoundReport::new(
        BoundKind::General,
        1.0 / (3.0 * ratio).sqrt(),
        Some("zero mode with no vanishing entries"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_values() {
        let b = symmetric_speed_bound(10, PI);
        assert!((b.bound_value - 0.5 * 99.5f64.sqrt()).abs() < 1e-14);
        let b = symmetric_speed_bound(1, PI);
        assert!((b.bound_value - 0.5 * 0.5f64.sqrt()).abs() < 1e-15);
        assert!(b.clone().with_achieved(1.0).satisfied);
        assert!(!b.with_achieved(0.1).satisfied);
    }

    #[test]
    fn general_uniform_three_sites() {
        // Σ = 1 + 4 + 1 = 6; ratio = (4 + 6)/6; bound = 1/√(3·10/6) = 1/√5
        let eta = EtaVector::normalized(vec![1.0; 3]).unwrap();
        let b = general_speed_bound(&eta).unwrap();
        assert!((b.bound_value - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        let neg = general_speed_bound(&eta.negated()).unwrap();
        assert_eq!(neg.bound_value, b.bound_value);
    }

    #[test]
    fn general_rejects_zero_and_short() {
        let eta = EtaVector::normalized(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(general_speed_bound(&eta).is_err());
        let eta = EtaVector::normalized(vec![1.0, 1.0]).unwrap();
        assert!(general_speed_bound(&eta).is_err());
    }
}
