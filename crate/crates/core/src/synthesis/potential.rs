use crate::{ChainSpec, Error, EtaVector, Result};

/// Choose coupling signs so that, row by row, the two coupling terms of
/// `(Hη)_n` partially cancel: `sign J_n = −sign(η_{n−1} J_{n−1} / η_{n+1})`,
/// working left to right from a positive `J_1`.
///
/// Where `η_{n−1}` or `η_{n+1}` vanishes the rule is undefined and the sign of
/// `J_n` is kept. The new signs are realised as a sign gauge, so the result is
/// isospectral to `chain`.
pub fn fix_coupling_signs(chain: &ChainSpec, eta: &EtaVector) -> Result<ChainSpec> {
    let e = eta.entries();
    check_len(chain, eta)?;
    let j = chain.couplings();
    let mut pattern = Vec::with_capacity(j.len());
    pattern.push(1.0);
    for n in 1..j.len() {
        let sign = if e[n - 1] != 0.0 && e[n + 1] != 0.0 {
            -(e[n - 1] * pattern[n - 1] / e[n + 1]).signum()
        } else if j[n] < 0.0 {
            -1.0
        } else {
            1.0
        };
        pattern.push(sign);
    }
    let gauge = chain.gauge_to_pattern(&pattern)?;
    chain.apply_sign_gauge(&gauge)
}

fn check_len(chain: &ChainSpec, eta: &EtaVector) -> Result<()> {
    if chain.len() != eta.len() {
        return Err(Error::DimensionMismatch {
            expected: chain.len(),
            actual: eta.len(),
        });
    }
    Ok(())
}

/// Diagonal potential `V_n = −(Hη)_n / η_n` with `(H + V)η = 0`, and its max
/// norm.
///
/// For a zero-field chain this is `−(η_{n−1}J_{n−1} + η_{n+1}J_n)/η_n`; with
/// fields present they are absorbed, so `V = 0` exactly when `η` is already a
/// zero mode.
pub fn residual_potential(chain: &ChainSpec, eta: &EtaVector) -> Result<(Vec<f64>, f64)> {
    if let Some(site) = eta.entries().iter().position(|x| *x == 0.0) {
        return Err(Error::ZeroEtaEntry { site });
    }
    residual_potential_masked(chain, eta)
}

/// As [`residual_potential`], but rows with `η_n = 0` get `V_n = 0`
/// (the field there does not enter the row).
pub fn residual_potential_masked(chain: &ChainSpec, eta: &EtaVector) -> Result<(Vec<f64>, f64)> {
    check_len(chain, eta)?;
    let e = eta.entries();
    let he = chain.apply(e);
    let v: Vec<f64> = he
        .iter()
        .zip(e)
        .map(|(r, x)| if *x == 0.0 { 0.0 } else { -r / x })
        .collect();
    let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok((v, norm))
}
