//! Engineering nearest-neighbour spin-chain Hamiltonians whose time evolution
//! carries a single-site excitation onto a prescribed single-excitation state.
//!
//! Restricted to the one-excitation subspace, a chain of `N` spins with local
//! fields `B_n` and exchange couplings `J_n` is the real symmetric tridiagonal
//! matrix
//!
//! ```text
//! H = Σ B_n |n⟩⟨n| + Σ J_n (|n⟩⟨n+1| + |n+1⟩⟨n|)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`chain`], [`eigen`], [`state`] and [`evolution`] hold the representation
//!   of such matrices, their spectral decomposition and exact time evolution.
//! * [`inverse`] contains the inverse-problem building blocks: the reduction of
//!   a target state to a reflection vector, the inverse eigenmode solve,
//!   spectrum snapping and Lanczos reconstruction of a Jacobi matrix.
//! * [`synthesis`] chains those blocks into end-to-end pipelines (numeric
//!   snapping, analytic Hahn chains and isospectral refinement).
//! * [`diagnostics`] evaluates fidelities, error estimates and speed bounds.
//! * [`io`] reads and writes the on-disk formats used by the CLI.
//!
//! Site indices are zero-based throughout the library.

pub mod chain;
pub mod diagnostics;
pub mod eigen;
mod error;
pub mod evolution;
pub mod inverse;
pub mod io;
pub mod state;
pub mod synthesis;

pub use chain::ChainSpec;
pub use eigen::{eigendecompose, EigenSystem};
pub use error::{Error, Result};
pub use evolution::{evolution_trace, evolve, EvolutionTrace};
pub use inverse::{EtaVector, EtaViolation, TargetSpectrum};
pub use state::StateVector;
pub use synthesis::SynthesisReport;
