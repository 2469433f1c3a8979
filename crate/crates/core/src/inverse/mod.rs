//! Inverse-problem building blocks.
//!
//! Generating a target state `|α⟩` from `|k⟩` reduces to building a Jacobi
//! matrix with the *reflection vector* `η = (|k⟩ − |α⟩)/√(2(1 − α_k))` as its
//! zero-eigenvalue eigenvector, and with every other eigenvalue an odd multiple
//! of `ε/2`. At `t₀ = 2π/ε` the propagator is then `−(I − 2ηηᵀ)`, which sends
//! `|k⟩` to `−|α⟩`.

mod eigenmode;
mod eta;
mod lanczos;
mod spectrum;

pub use eigenmode::inverse_eigenmode;
pub use eta::{eta_from_target, validate_eta, EtaVector, EtaViolation, ETA_ZERO_THRESHOLD};
pub use lanczos::lanczos_reconstruct;
pub use spectrum::{auto_epsilon, min_gap, snap_spectrum, EpsilonChoice, TargetSpectrum};
