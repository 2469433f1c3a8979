use crate::{ChainSpec, Error, Result};

use super::EtaVector;

/// Build a chain with `η` as an exact zero-eigenvalue eigenvector.
///
/// Couplings default to 1. Each row `η_{n−1}J_{n−1} + η_n B_n + η_{n+1}J_n = 0`
/// then fixes `B_n`. Where `η_n = 0` the row no longer involves `B_n`, so the
/// coupling `J_n` is overridden to `−η_{n−1}J_{n−1}/η_{n+1}` and `B_n` is set
/// to 0.
pub fn inverse_eigenmode(eta: &EtaVector, base_couplings: Option<&[f64]>) -> Result<ChainSpec> {
    let e = eta.entries();
    let n = e.len();
    let mut j = match base_couplings {
        Some(c) if c.len() != n - 1 => {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: c.len(),
            })
        }
        Some(c) => c.to_vec(),
        None => vec![1.0; n - 1],
    };
    // Validation guarantees zeros are interior and isolated, so J_{n−1} is
    // never itself overridden when it is read here.
    for i in 1..n - 1 {
        if e[i] == 0.0 {
            j[i] = -e[i - 1] * j[i - 1] / e[i + 1];
        }
    }
    let fields = (0..n)
        .map(|i| {
            if e[i] == 0.0 {
                return 0.0;
            }
            let left = if i > 0 { e[i - 1] * j[i - 1] } else { 0.0 };
            let right = if i + 1 < n { e[i + 1] * j[i] } else { 0.0 };
            -(left + right) / e[i]
        })
        .collect();
    ChainSpec::new(fields, j)
}
