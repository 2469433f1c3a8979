//! Single-excitation chain Hamiltonians.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A length-`N` spin chain restricted to its one-excitation subspace.
///
/// `fields[n]` is the diagonal entry `B_n` and `couplings[n]` the symmetric
/// off-diagonal entry `J_n` linking sites `n` and `n + 1`. Only one copy of
/// each coupling is stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainRecord", into = "ChainRecord")]
pub struct ChainSpec {
    fields: Vec<f64>,
    couplings: Vec<f64>,
}

/// On-disk shape of a chain: `{"n": N, "fields": [...], "couplings": [...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainRecord {
    n: usize,
    fields: Vec<f64>,
    couplings: Vec<f64>,
}

impl TryFrom<ChainRecord> for ChainSpec {
    type Error = Error;

    fn try_from(record: ChainRecord) -> Result<Self> {
        if record.fields.len() != record.n {
            return Err(Error::DimensionMismatch {
                expected: record.n,
                actual: record.fields.len(),
            });
        }
        ChainSpec::new(record.fields, record.couplings)
    }
}

impl From<ChainSpec> for ChainRecord {
    fn from(chain: ChainSpec) -> Self {
        ChainRecord {
            n: chain.len(),
            fields: chain.fields,
            couplings: chain.couplings,
        }
    }
}

impl ChainSpec {
    pub fn new(fields: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        let n = fields.len();
        if n < 2 {
            return Err(Error::InvalidChain(format!(
                "a chain needs at least 2 sites, got {n}"
            )));
        }
        if couplings.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: couplings.len(),
            });
        }
        if let Some(i) = fields.iter().position(|b| !b.is_finite()) {
            return Err(Error::InvalidChain(format!("field {i} is not finite")));
        }
        if let Some(i) = couplings.iter().position(|j| !j.is_finite()) {
            return Err(Error::InvalidChain(format!("coupling {i} is not finite")));
        }
        Ok(Self { fields, couplings })
    }

    /// Zero fields and a constant coupling on every bond.
    pub fn uniform(n: usize, coupling: f64) -> Result<Self> {
        Self::new(vec![0.0; n], vec![coupling; n.saturating_sub(1)])
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.fields, self.couplings)
    }

    /// Dense `N × N` matrix of the Hamiltonian.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &b) in self.fields.iter().enumerate() {
            m[(i, i)] = b;
        }
        for (i, &j) in self.couplings.iter().enumerate() {
            m[(i, i + 1)] = j;
            m[(i + 1, i)] = j;
        }
        m
    }

    /// Matrix-vector product `H v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.len(), "vector length must match the chain");
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.fields[i] * v[i];
                if i > 0 {
                    acc += self.couplings[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.couplings[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Infinity norm of the matrix, an upper bound on its spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.couplings[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.couplings[i].abs() } else { 0.0 };
                self.fields[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Largest coupling magnitude `J_max`.
    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().fold(0.0, |m, j| m.max(j.abs()))
    }

    /// Bonds whose coupling is exactly zero. Such a chain is disconnected and
    /// may have a degenerate spectrum.
    pub fn zero_couplings(&self) -> Vec<usize> {
        self.couplings
            .iter()
            .enumerate()
            .filter(|(_, j)| **j == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.couplings.iter().all(|j| *j != 0.0)
    }

    /// The chain with every field shifted by `offset`. This is an identity
    /// shift of the Hamiltonian and only changes the global phase of evolution.
    pub fn with_energy_offset(&self, offset: f64) -> Self {
        Self {
            fields: self.fields.iter().map(|b| b + offset).collect(),
            couplings: self.couplings.clone(),
        }
    }

    /// Mirror image `n ↦ N − 1 − n`.
    pub fn reversed(&self) -> Self {
        let mut fields = self.fields.clone();
        let mut couplings = self.couplings.clone();
        fields.reverse();
        couplings.reverse();
        Self { fields, couplings }
    }

    /// Conjugate by the diagonal sign matrix `D = diag(signs)`.
    ///
    /// Fields are unchanged and `J_m ↦ D_m D_{m+1} J_m`. The result is
    /// isospectral to `self` and its eigenvectors are `D` times the original
    /// ones.
    pub fn apply_sign_gauge(&self, signs: &[i8]) -> Result<Self> {
        if signs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: signs.len(),
            });
        }
        if let Some(i) = signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidArgument(format!(
                "sign {i} is {}, expected +1 or -1",
                signs[i]
            )));
        }
        let couplings = self
            .couplings
            .iter()
            .zip(signs.windows(2))
            .map(|(j, d)| f64::from(d[0] * d[1]) * j)
            .collect();
        Ok(Self {
            fields: self.fields.clone(),
            couplings,
        })
    }

    /// The sign gauge that turns `self` into a chain with couplings carrying
    /// the signs in `pattern` (zero couplings and zero pattern entries are
    /// treated as positive).
    pub fn gauge_to_pattern(&self, pattern: &[f64]) -> Result<Vec<i8>> {
        if pattern.len() != self.couplings.len() {
            return Err(Error::DimensionMismatch {
                expected: self.couplings.len(),
                actual: pattern.len(),
            });
        }
        let mut signs = Vec::with_capacity(self.len());
        signs.push(1i8);
        for (j, p) in self.couplings.iter().zip(pattern) {
            let have = if *j < 0.0 { -1 } else { 1 };
            let want = if *p < 0.0 { -1 } else { 1 };
            let prev = *signs.last().expect("nonempty");
            signs.push(prev * have * want);
        }
        Ok(signs)
    }

    /// Gauge with all couplings non-negative.
    pub fn with_positive_couplings(&self) -> Self {
        Self {
            fields: self.fields.clone(),
            couplings: self.couplings.iter().map(|j| j.abs()).collect(),
        }
    }

    /// Whether the chain is mirror symmetric: `B_n = B_{N−1−n}` and
    /// `J_n² = J_{N−2−n}²` within `tol`.
    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        let n = self.len();
        let fields_ok = (0..n).all(|i| (self.fields[i] - self.fields[n - 1 - i]).abs() <= tol);
        let m = self.couplings.len();
        let couplings_ok = (0..m)
            .all(|i| (self.couplings[i].abs() - self.couplings[m - 1 - i].abs()).abs() <= tol);
        fields_ok && couplings_ok
    }
}
