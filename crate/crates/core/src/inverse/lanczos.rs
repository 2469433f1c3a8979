use nalgebra::{DMatrix, DVector};

use crate::{ChainSpec, Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;
const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// Rebuild the Jacobi matrix with eigenvalues `spectrum` whose eigenvectors
/// have first components `first_components` (up to sign).
///
/// Runs Lanczos on `diag(spectrum)` from the start vector `first_components`
/// with full re-orthogonalisation (two Gram–Schmidt passes per step).
/// Couplings come out positive. Only the squares of the components matter.
pub fn lanczos_reconstruct(spectrum: &[f64], first_components: &[f64]) -> Result<ChainSpec> {
    let n = spectrum.len();
    if first_components.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: first_components.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a chain needs at least 2 sites".into(),
        ));
    }
    for (i, w) in spectrum.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::Degenerate {
                first: i,
                second: i + 1,
            });
        }
    }
    let norm = first_components.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    if first_components.contains(&0.0) {
        return Err(Error::LanczosBreakdown { step: 0 });
    }

    let scale = spectrum.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let lambda = DVector::from_column_slice(spectrum);
    let mut q = DMatrix::<f64>::zeros(n, n);
    q.set_column(0, &(DVector::from_column_slice(first_components) / norm));
    let mut fields = Vec::with_capacity(n);
    let mut couplings = Vec::with_capacity(n - 1);

    for j in 0..n {
        let qj = q.column(j).clone_owned();
        let mut r = lambda.component_mul(&qj);
        fields.push(qj.dot(&r));
        if j + 1 == n {
            break;
        }
        for _ in 0..2 {
            for i in 0..=j {
                let qi = q.column(i);
                let c = qi.dot(&r);
                r.axpy(-c, &qi, 1.0);
            }
        }
        let beta = r.norm();
        if beta <= 1e-13 * scale {
            return Err(Error::LanczosBreakdown { step: j + 1 });
        }
        couplings.push(beta);
        q.set_column(j + 1, &(r / beta));
    }

    let gram = q.transpose() * &q;
    let deviation = (gram - DMatrix::<f64>::identity(n, n)).amax();
    if deviation > ORTHOGONALITY_TOLERANCE {
        return Err(Error::LossOfOrthogonality { deviation });
    }
    ChainSpec::new(fields, couplings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigendecompose;

    #[test]
    fn two_by_two() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = lanczos_reconstruct(&[-1.0, 1.0], &[h, h]).unwrap();
        assert!(c.fields()[0].abs() < 1e-15 && c.fields()[1].abs() < 1e-15);
        assert!((c.couplings()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_positive_chain() {
        let chain = ChainSpec::new(
            vec![0.3, -1.2, 0.7, 2.0, -0.4, 0.0],
            vec![1.0, 0.4, 2.2, 0.9, 1.3],
        )
        .unwrap();
        let es = eigendecompose(&chain).unwrap();
        let back = lanczos_reconstruct(es.values(), &es.first_components()).unwrap();
        for (a, b) in back.fields().iter().zip(chain.fields()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in back.couplings().iter().zip(chain.couplings()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn component_signs_do_not_matter() {
        let s = [-2.0, -0.5, 0.0, 1.0];
        let w = [0.5, -0.5, 0.5, 0.5];
        let a = lanczos_reconstruct(&s, &[0.5; 4]).unwrap();
        let b = lanczos_reconstruct(&s, &w).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_component_breaks_down() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(matches!(
            lanczos_reconstruct(&[-1.0, 0.0, 1.0], &[h, 0.0, h]),
            Err(Error::LanczosBreakdown { .. })
        ));
        assert!(lanczos_reconstruct(&[-1.0, 1.0], &[1.0, 1.0]).is_err());
    }
}
