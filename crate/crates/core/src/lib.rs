//! Statevector VQE engine for hardware-efficient ansaetze.
//!
//! The crate is organised bottom-up:
//!
//! * [`statevector`] dense amplitudes, gate matrices and application kernels;
//! * [`pauli`] Pauli-sum Hamiltonians, expectation values, exact
//!   diagonalization and the JSON Hamiltonian format;
//! * [`ansatz`] the parameterized circuit IR, builders for the six ansatz
//!   families, the Pauli-rotation compiler and resource counting;
//! * [`gradient`] adjoint energy gradients;
//! * [`optimize`] BFGS and the layerwise optimization driver;
//! * [`experiments`] size-consistency, convergence, scaling and
//!   gradient-variance harnesses with CSV output.

pub mod ansatz;
pub mod error;
pub mod experiments;
pub mod gradient;
pub mod optimize;
pub mod pauli;
pub mod statevector;

pub use ansatz::{AnsatzKind, Circuit};
pub use error::{Error, Result};
pub use pauli::{PauliString, PauliSum};
pub use statevector::{GateMatrix, Statevector};

/// Chemical accuracy, in Hartree (or model energy units).
pub const CHEMICAL_ACCURACY: f64 = 1.0e-3;
