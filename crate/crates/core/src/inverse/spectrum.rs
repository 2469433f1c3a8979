use crate::{Error, Result};

/// Relative tolerance for deciding that a value is the zero eigenvalue.
const ZERO_TOLERANCE: f64 = 1e-12;

/// A spectrum with the reflection phase pattern at `t0 = 2π/ε`: one exact 0
/// and every other value an odd multiple of `ε/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpectrum {
    values: Vec<f64>,
    epsilon: f64,
    t0: f64,
}

impl TargetSpectrum {
    /// Wrap values that already have the phase pattern (within `1e-9` in
    /// units of `ε/2`). Values are rounded onto the lattice exactly.
    pub fn new(mut values: Vec<f64>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        values.sort_by(f64::total_cmp);
        let half = epsilon / 2.0;
        let mut zeros = 0;
        for v in values.iter_mut() {
            let x = *v / half;
            let r = x.round();
            if (x - r).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "{v} is not a multiple of epsilon/2"
                )));
            }
            if r == 0.0 {
                zeros += 1;
                *v = 0.0;
            } else if r.rem_euclid(2.0) != 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "{v} is an even multiple of epsilon/2"
                )));
            } else {
                *v = r * half;
            }
        }
        if zeros != 1 {
            return Err(Error::ZeroEigenvalue { found: zeros });
        }
        check_strict(&values)?;
        Ok(Self {
            values,
            epsilon,
            t0: 2.0 * std::f64::consts::PI / epsilon,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn zero_index(&self) -> usize {
        self.values
            .iter()
            .position(|v| *v == 0.0)
            .expect("invariant: one zero")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_strict(values: &[f64]) -> Result<()> {
    for (i, w) in values.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::Degenerate {
                first: i,
                second: i + 1,
            });
        }
    }
    Ok(())
}

/// Smallest gap between consecutive sorted values.
pub fn min_gap(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two values to form a gap".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    check_strict(&sorted)?;
    Ok(sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min))
}

/// Nearest odd multiple of `half`, ties toward zero.
fn nearest_odd(x: f64, half: f64) -> f64 {
    let u = x / half;
    let lo = 2.0 * ((u - 1.0) / 2.0).floor() + 1.0;
    let hi = lo + 2.0;
    let (dl, dh) = (u - lo, hi - u);
    let pick = if dl < dh {
        lo
    } else if dh < dl {
        hi
    } else if lo.abs() <= hi.abs() {
        lo
    } else {
        hi
    };
    pick * half
}

/// Move 0 to exactly 0 and every other value to its nearest odd multiple of
/// `ε/2`. Each value moves by at most `ε/2`.
///
/// `ε` below half the smallest gap always keeps the order (see
/// [`auto_epsilon`]); a larger `ε` is accepted as long as the snapped values
/// stay strictly increasing.
pub fn snap_spectrum(values: &[f64], epsilon: f64) -> Result<TargetSpectrum> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let gap = min_gap(values)?;
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let zeros = values
        .iter()
        .filter(|v| v.abs() <= ZERO_TOLERANCE * scale)
        .count();
    if zeros != 1 {
        return Err(Error::ZeroEigenvalue { found: zeros });
    }
    let half = epsilon / 2.0;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let snapped: Vec<f64> = sorted
        .iter()
        .map(|&v| {
            if v.abs() <= ZERO_TOLERANCE * scale {
                0.0
            } else {
                nearest_odd(v, half)
            }
        })
        .collect();
    if snapped.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::EpsilonTooLarge {
            epsilon,
            half_gap: gap / 2.0,
        });
    }
    Ok(TargetSpectrum {
        values: snapped,
        epsilon,
        t0: 2.0 * std::f64::consts::PI / epsilon,
    })
}

/// Outcome of [`auto_epsilon`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonChoice {
    pub epsilon: f64,
    /// Set when a requested value was rejected and the default was used.
    pub fallback: bool,
}

/// Accept `requested` if it is below half the smallest gap; otherwise use
/// `10^⌊log₁₀(0.1·min_gap)⌋`.
pub fn auto_epsilon(values: &[f64], requested: Option<f64>) -> Result<EpsilonChoice> {
    let gap = min_gap(values)?;
    if let Some(eps) = requested {
        if eps > 0.0 && eps.is_finite() && eps < gap / 2.0 {
            return Ok(EpsilonChoice {
                epsilon: eps,
                fallback: false,
            });
        }
    }
    let epsilon = 10f64.powf((0.1 * gap).log10().floor());
    Ok(EpsilonChoice {
        epsilon,
        fallback: requested.is_some(),
    })
}
