use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

const PINV_THRESHOLD: f64 = 1e-10;
const RESIDUAL_TOLERANCE: f64 = 1e-8;
const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// Second-order error analysis of spectrum snapping.
///
/// With `V_{mn} = |U_{nm}|²`, the diagonal `G` solves `Σ_n V_{mn} G_n = e_m`,
/// where `e_m` is the eigenvalue error of mode `m` in units of `ε`; the
/// zero-mode error is then `ε²⟨m|K²|m⟩ = ε² Σ_n |U_{nm}|² G_n²`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorEstimate {
    pub e_fractions: Vec<f64>,
    pub g_diag: Vec<f64>,
    pub g_norm_sq: f64,
    /// Smallest nonzero singular value of `V` restricted to its distinct rows
    /// and columns.
    pub zeta: f64,
    pub per_mode_k2: Vec<f64>,
    pub residual: f64,
}

/// Solve for `G` by minimum-norm least squares (singular values below
/// `1e-10·σ_max` dropped) and report `ζ` and `⟨m|K²|m⟩`.
///
/// A symmetric chain makes `V` singular through mirror-duplicated rows and
/// columns; `ζ` is taken on the reduced matrix with the duplicates removed,
/// which is the block on which the system is actually solvable.
pub fn error_estimate(u: &DMatrix<f64>, e_fractions: &[f64]) -> Result<ErrorEstimate> {
    let n = u.nrows();
    if u.ncols() != n || e_fractions.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if u.ncols() != n { u.ncols() } else { e_fractions.len() },
        });
    }
    if e_fractions.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("error fractions must be finite".into()));
    }
    let dev = (u.transpose() * u - DMatrix::<f64>::identity(n, n)).amax();
    if dev > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "eigenvector matrix is not orthogonal (deviation {dev:e})"
        )));
    }
    // rows: modes m, columns: sites n
    let v = DMatrix::from_fn(n, n, |m, s| u[(s, m)] * u[(s, m)]);
    let e = DVector::from_column_slice(e_fractions);

    let svd = v.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let g = svd
        .solve(&e, PINV_THRESHOLD * smax)
        .map_err(|msg| Error::InvalidArgument(msg.to_string()))?;
    let residual = (&v * &g - &e).amax();
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::NoSolution { residual });
    }

    let per_mode_k2 = (0..n)
        .map(|m| (0..n).map(|s| v[(m, s)] * g[s] * g[s]).sum())
        .collect();
    let g_diag: Vec<f64> = g.iter().copied().collect();
    Ok(ErrorEstimate {
        e_fractions: e_fractions.to_vec(),
        g_norm_sq: g_diag.iter().map(|x| x * x).sum(),
        g_diag,
        zeta: reduced_zeta(&v),
        per_mode_k2,
        residual,
    })
}

fn distinct(vectors: Vec<DVector<f64>>) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for (i, x) in vectors.iter().enumerate() {
        if !keep
            .iter()
            .any(|&k| (x - &vectors[k]).amax() <= DUPLICATE_TOLERANCE)
        {
            keep.push(i);
        }
    }
    keep
}

fn reduced_zeta(v: &DMatrix<f64>) -> f64 {
    let rows = distinct(v.row_iter().map(|r| r.transpose()).collect());
    let cols = distinct(v.column_iter().map(|c| c.clone_owned()).collect());
    let reduced = DMatrix::from_fn(rows.len(), cols.len(), |i, j| v[(rows[i], cols[j])]);
    let sv = reduced.singular_values();
    let cut = PINV_THRESHOLD * sv.max();
    sv.iter()
        .copied()
        .filter(|s| *s > cut)
        .fold(f64::INFINITY, f64::min)
}
