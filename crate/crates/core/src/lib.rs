//! Weak-measurement-assisted symmetric 1→2 cloning of two known nonorthogonal
//! qubit states.
//!
//! The pipeline is: a two-outcome weak measurement in the |±⟩ basis pushes the
//! pair `cos ξ|0⟩ + sin ξ|1⟩`, `sin ξ|0⟩ + cos ξ|1⟩` apart to an effective angle
//! `ξ′`; on the `yes` outcome the intermediate qubit is fed to an optimal
//! state-dependent cloner tuned for `(ξ, ξ′)`. Every closed form here is paired
//! with an explicit state-vector path or a numerical optimizer so the two can
//! be checked against each other (see [`verify`]).
//!
//! Modules:
//! - [`qmath`]: 1- and 2-qubit states, partial trace, fidelity.
//! - [`weakmeas`]: Kraus pair, post-selection, effective angle, sampling.
//! - [`cloner`]: cloning coefficients, the isometry, fidelity closed forms.
//! - [`optimal`]: optimal coefficients, optimal fidelity, brute-force oracle.
//! - [`protocol`]: end-to-end pipeline and seeded Monte Carlo.
//! - [`cli`]: table rendering and the subcommands behind the `wmclone` binary.

pub mod cli;
pub mod cloner;
mod error;
pub mod optimal;
pub mod par;
pub mod protocol;
pub mod qmath;
pub mod verify;
pub mod weakmeas;

pub use error::{Error, Result};

/// Tolerance for algebraic identities throughout the crate.
pub const TOL: f64 = 1e-12;
