//! Noisy variational-circuit simulation with truncated-subspace costs.
//!
//! The crate simulates hardware-efficient parameterized circuits under a
//! per-block local Pauli channel (exact density matrices, no sampling), and
//! studies a family of cost functions built from an observable restricted to
//! a promised solution subspace:
//!
//! * `C0` — plain expectation of the observable,
//! * `C1` — subspace-truncated Rayleigh-style quotient,
//! * `C2` — the same quotient with the traceful parts subtracted, which
//!   provably amplifies gradients relative to `C1` under noise, at the price
//!   of a singular denominator (a regularized variant is used for stepping).
//!
//! The crate's three jobs:
//!
//! 1. **Simulate**: dense density matrices, Pauli-basis transforms, noisy
//!    ansatz execution ([`density`], [`pauli`], [`ansatz`]).
//! 2. **Train**: surrogate-gradient descent — step on the regularized `C2`,
//!    report `C1` — with paired-run comparison protocols ([`cost`],
//!    [`train`], [`problems`]).
//! 3. **Verify**: every analytic claim (norm decay, gradient bounds,
//!    amplification, singular cost profiles, solution-space structure) is an
//!    executable check over randomized circuits ([`checks`]).
//!
//! Entry points for exploration live in `examples/`; the thin `noisy-vqa`
//! binary exposes the same capabilities as `run`, `compare`, `survey`, and
//! `bounds-check` subcommands.

pub mod ansatz;
pub mod checks;
pub mod config;
pub mod cost;
pub mod density;
pub mod error;
pub mod linalg;
pub mod pauli;
pub mod problems;
pub mod runner;
pub mod subspace;
pub mod train;

pub use ansatz::{AnsatzSpec, EntanglerLayout, RotationAxis};
pub use cost::{CostKind, TruncatedObservables};
pub use density::{DensityMatrix, NoiseModel};
pub use error::{Error, Result};
pub use pauli::{PauliLetter, PauliObservable, PauliString};
pub use problems::ProblemInstance;
pub use subspace::Subspace;
