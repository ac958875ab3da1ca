//! Two-qubit entanglement under unitary control and Markovian dissipation.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, a Jacobi
//!   eigensolver, matrix exponentials and PSD square roots.
//! * [`state`]: pure states, density matrices, the coefficient-matrix
//!   separability test and the ρ ↔ r (Liouville vector) correspondence.
//! * [`entanglement`]: pure and Wootters concurrence, entanglement of formation.
//! * [`dynamics`]: control Hamiltonians, Liouville superoperators from rates
//!   or Lindblad operators, dephasing constraints and time propagation.
//! * [`scenario`]: simulation configs, trajectory tables, CSV and SVG output.

pub mod dynamics;
pub mod entanglement;
pub mod linalg;
pub mod plot;
pub mod random;
pub mod scenario;
pub mod state;

pub use linalg::{CMatrix, LinalgError};
pub use num_complex::Complex64;
