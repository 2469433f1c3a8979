use crate::ChainSpec;

/// Two different chains sharing the spectrum `{0, ±3, ±5}` and the 5-site
/// W state as zero mode, showing the hybrid inverse problem is not uniquely
/// solvable.
///
/// Fields `(−J₁, −J₁−J₂, 0, J₁+J₂, J₁)`, couplings `(J₁, J₂, −J₂, −J₁)` with
/// `J₂ = −√45/J₁` and `J₁² = (17 + 3√5 ± √(102√5 − 206))/4`.
pub fn dual_w5_chains() -> [ChainSpec; 2] {
    let s5 = 5f64.sqrt();
    let root = (102.0 * s5 - 206.0).sqrt();
    [1.0, -1.0].map(|sign| {
        let j1 = ((17.0 + 3.0 * s5 + sign * root) / 4.0).sqrt();
        let j2 = -45f64.sqrt() / j1;
        ChainSpec::new(
            vec![-j1, -j1 - j2, 0.0, j1 + j2, j1],
            vec![j1, j2, -j2, -j1],
        )
        .expect("finite entries")
    })
}
