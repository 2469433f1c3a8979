use crate::{ChainSpec, Error, Result};

const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Parameters of the `N × N` Hahn matrix (chain length `2N + 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HahnParameters {
    n: usize,
    alpha: f64,
}

impl HahnParameters {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "Hahn matrix size must be at least 2, got {n}"
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Hahn parameter alpha must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn chain_len(&self) -> usize {
        2 * self.n + 1
    }

    /// `(2α + 1)/2`, the offset between the Hahn and chain spectra.
    fn shift(&self) -> f64 {
        (2.0 * self.alpha + 1.0) / 2.0
    }
}

/// Diagonal `h_n` and off-diagonal `K_n` of the Hahn matrix, 1-based `n`:
///
/// ```text
/// h_n = (N−1)((N+1)/2 + α) − 2(n − (N+1)/2)²
/// K_n = √(n(n+α)(N−n)(N+α−n))
/// ```
///
/// Its spectrum is `k(k + 2α + 1)` for `k = 0..N−1`.
pub fn hahn_matrix(params: HahnParameters) -> (Vec<f64>, Vec<f64>) {
    let n = params.n as f64;
    let a = params.alpha;
    let mid = (n + 1.0) / 2.0;
    let h = (1..=params.n)
        .map(|i| {
            let d = i as f64 - mid;
            (n - 1.0) * (mid + a) - 2.0 * d * d
        })
        .collect();
    let k = (1..params.n)
        .map(|i| {
            let i = i as f64;
            (i * (i + a) * (n - i) * (n + a - i)).sqrt()
        })
        .collect();
    (h, k)
}

/// `{0} ∪ {±(k + α + ½) : k = 0..N−1}` in ascending order.
pub fn hahn_spectrum(params: HahnParameters) -> Vec<f64> {
    let c = params.shift();
    let mut v: Vec<f64> = (0..params.n)
        .flat_map(|k| [k as f64 + c, -(k as f64 + c)])
        .collect();
    v.push(0.0);
    v.sort_by(f64::total_cmp);
    v
}

/// The mirror-symmetric zero-diagonal chain of length `2N + 1` whose squared
/// Hamiltonian restricted to the even sites is `Hahn + ((2α+1)/2)²`:
///
/// ```text
/// J_{2n−1}² + J_{2n}² = h_n + ((2α+1)/2)²,   J_{2n} J_{2n+1} = K_n
/// ```
///
/// Solved from the closed-form centre coupling outwards and mirrored; every
/// equation is then checked as a residual relative to `max h_n + c²`.
/// Couplings are returned positive.
pub fn hahn_chain(params: HahnParameters) -> Result<ChainSpec> {
    let (h, k) = hahn_matrix(params);
    let n = params.n;
    let c2 = params.shift().powi(2);
    let sum = |i: usize| h[i - 1] + c2; // 1-based i
    let prod = |i: usize| k[i - 1];

    // j[m] holds the 1-based coupling J_m; j[0] unused.
    let mut j = vec![0.0; 2 * n + 1];
    j[n] = if n % 2 == 1 {
        (sum(n.div_ceil(2)) / 2.0).sqrt()
    } else {
        prod(n / 2).sqrt()
    };
    for m in (2..=n).rev() {
        let value = if m % 2 == 0 {
            // (J_{m−1}, J_m) is a sum pair with m = 2i
            let r = sum(m / 2) - j[m] * j[m];
            if r < 0.0 {
                return Err(Error::NegativeRadicand {
                    index: m - 1,
                    value: r,
                });
            }
            r.sqrt()
        } else {
            // (J_{m−1}, J_m) is a product pair with m − 1 = 2i
            prod((m - 1) / 2) / j[m]
        };
        j[m - 1] = value;
    }
    for m in 1..=n {
        j[2 * n + 1 - m] = j[m];
    }

    let scale = h.iter().fold(0.0f64, |a, x| a.max(x.abs())) + c2;
    let mut residual = 0.0f64;
    for i in 1..=n {
        residual = residual.max((j[2 * i - 1].powi(2) + j[2 * i].powi(2) - sum(i)).abs());
    }
    for i in 1..n {
        residual = residual.max((j[2 * i] * j[2 * i + 1] - prod(i)).abs());
    }
    let residual = residual / scale;
    if residual > RESIDUAL_TOLERANCE || !residual.is_finite() {
        return Err(Error::HahnResidual { residual });
    }
    ChainSpec::new(vec![0.0; 2 * n + 1], j[1..].to_vec())
}

/// Normalised zero-eigenvalue eigenvector of a connected zero-diagonal chain
/// of odd length, by direct recursion: even (1-based) sites vanish and
/// `v_{m+2} = −J_m v_m / J_{m+1}`. The first entry is positive.
pub fn zero_mode(chain: &ChainSpec) -> Result<Vec<f64>> {
    let len = chain.len();
    if len.is_multiple_of(2) || chain.fields().iter().any(|b| *b != 0.0) {
        return Err(Error::InvalidArgument(
            "zero_mode needs a zero-diagonal chain of odd length".into(),
        ));
    }
    if !chain.is_connected() {
        return Err(Error::InvalidChain("chain has a zero coupling".into()));
    }
    let j = chain.couplings();
    let mut v = vec![0.0; len];
    v[0] = 1.0;
    let mut norm2 = 1.0;
    for i in (2..len).step_by(2) {
        v[i] = -j[i - 2] * v[i - 2] / j[i - 1];
        norm2 += v[i] * v[i];
        // keep magnitudes bounded on very long chains
        if norm2 > 1e150 {
            let s = norm2.sqrt();
            v.iter_mut().for_each(|x| *x /= s);
            norm2 = 1.0;
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigendecompose;

    #[test]
    fn hahn_matrix_small_case() {
        let (h, k) = hahn_matrix(HahnParameters::new(3, 1.0).unwrap());
        assert_eq!(h, vec![4.0, 6.0, 4.0]);
        for x in k {
            assert!((x - 12f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn hahn_matrix_spectrum() {
        for (n, a) in [(2, 0.0), (5, 0.0), (6, 1.0), (9, 2.5)] {
            let p = HahnParameters::new(n, a).unwrap();
            let (h, k) = hahn_matrix(p);
            let es = eigendecompose(&ChainSpec::new(h, k).unwrap()).unwrap();
            for (i, v) in es.values().iter().enumerate() {
                let i = i as f64;
                assert!((v - i * (i + 2.0 * a + 1.0)).abs() < 1e-9, "{n} {a}: {v}");
            }
        }
    }

    #[test]
    fn seven_site_chain() {
        let c = hahn_chain(HahnParameters::new(3, 1.0).unwrap()).unwrap();
        let a = 3.5 * (3.0f64 / 11.0).sqrt();
        let b = 4.0 * (2.0f64 / 11.0).sqrt();
        let m = (16.5f64).sqrt() / 2.0;
        for (x, y) in c.couplings().iter().zip([a, b, m, m, b, a]) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        let v = zero_mode(&c).unwrap();
        assert!(((v[2] / v[0]).abs() - 1.072).abs() < 1e-3);
        assert!((v[6] / v[0]).abs() - 1.0 < 1e-12);
    }

    #[test]
    fn chain_spectrum_and_symmetry() {
        for (n, a) in [(2, 0.0), (3, 1.0), (10, 0.0), (11, 2.0), (25, 0.0)] {
            let p = HahnParameters::new(n, a).unwrap();
            let c = hahn_chain(p).unwrap();
            assert_eq!(c.len(), 2 * n + 1);
            assert!(c.is_mirror_symmetric(1e-12));
            let es = eigendecompose(&c).unwrap();
            for (x, y) in es.values().iter().zip(hahn_spectrum(p)) {
                assert!((x - y).abs() < 1e-9, "{n} {a}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn zero_mode_is_annihilated() {
        let c = hahn_chain(HahnParameters::new(8, 1.0).unwrap()).unwrap();
        let v = zero_mode(&c).unwrap();
        let r = c.apply(&v);
        assert!(r.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HahnParameters::new(1, 0.0).is_err());
        assert!(HahnParameters::new(3, -0.5).is_err());
    }
}
