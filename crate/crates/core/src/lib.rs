// SPDX-License-Identifier: Apache-2.0

//! Numerical spin physics for endohedral fullerene qubits (N@C60 family).
//!
//! The crate is organised bottom-up:
//!
//! * [`spin`] builds angular-momentum matrices and product-space embeddings.
//! * [`species`] and [`hamiltonian`] describe molecules, fields and the static
//!   laboratory-frame Hamiltonians (single molecule, ¹³C isotopologues, dimers).
//! * [`spectral`] diagonalises, enumerates EPR/NMR transitions, evaluates
//!   perturbative level schemes and synthesises CW-EPR traces.
//! * [`dynamics`] propagates density matrices under pulse sequences (Rabi,
//!   Hahn-echo ESEEM, nuclear Rabi, exchange entanglement).
//! * [`gates`] evaluates naive and BB1 composite rotations under control errors.
//!
//! All Hamiltonians are stored in linear-frequency units (MHz); fields are in
//! mT and times in ns.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod hamiltonian;
pub mod linalg;
pub mod parallel;
pub mod quadrature;
pub mod species;
pub mod spectral;
pub mod spin;
pub mod trace;

pub use error::{Error, Result};
pub use hamiltonian::{
    build_dimer_hamiltonian, build_static_hamiltonian, dipolar_coupling, CouplingSpec, ExtendedSpecies,
};
pub use species::{field_for_resonance, FieldConfig, SpeciesParams};
pub use spin::{embed, spin_matrices, Basis, FactorKind, SpinOperator, SpinQuantumNumber};
pub use trace::{AxisUnit, SpectrumTrace};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
