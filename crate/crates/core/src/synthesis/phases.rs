use num_complex::Complex64;

use crate::StateVector;

/// Split a complex target into normalised magnitudes and phases `Arg(α_n)`
/// (0 where the amplitude vanishes).
///
/// The chain is built for the magnitudes; local `R_Z(Arg α_n)` rotations after
/// the evolution restore the phases.
pub fn phase_corrections(alpha: &StateVector) -> (Vec<f64>, Vec<f64>) {
    let mut mags: Vec<f64> = alpha.amplitudes().iter().map(|a| a.norm()).collect();
    let norm = mags.iter().map(|x| x * x).sum::<f64>().sqrt();
    mags.iter_mut().for_each(|m| *m /= norm);
    let phases = alpha
        .amplitudes()
        .iter()
        .map(|a| if a.norm() == 0.0 { 0.0 } else { a.arg() })
        .collect();
    (mags, phases)
}

/// `m_n e^{i φ_n}`, the inverse of [`phase_corrections`].
pub fn recombine(magnitudes: &[f64], phases: &[f64]) -> Vec<Complex64> {
    magnitudes
        .iter()
        .zip(phases)
        .map(|(m, p)| Complex64::from_polar(*m, *p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn real_positive_has_zero_phases() {
        let s = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let (m, p) = phase_corrections(&s);
        assert_eq!(p, vec![0.0, 0.0]);
        assert!((m[0] - 0.6).abs() < 1e-15 && (m[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn imaginary_component() {
        let s = StateVector::new(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ])
        .unwrap();
        let (m, p) = phase_corrections(&s);
        assert!((m[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (m[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(p[0].abs() < 1e-15 && (p[1] - FRAC_PI_2).abs() < 1e-15);
        for (a, b) in recombine(&m, &p).iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_amplitude_has_zero_phase() {
        let s = StateVector::new(vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        let (_, p) = phase_corrections(&s);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - std::f64::consts::PI).abs() < 1e-15);
    }
}
