// SPDX-License-Identifier: Apache-2.0

//! Exact and perturbative spectra, transition enumeration and CW-EPR synthesis.

mod cw;
mod eigen;
mod perturbation;
mod transitions;

pub use cw::{
    composite_spectrum, isotopologue_weights, line_positions, synthesize_cw_spectrum, AxisSpec, C13Profile, CwParams,
    MixtureComponent, SweepMode,
};
pub use eigen::{diagonalize, EigenSystem, HERMITIAN_TOL};
pub use perturbation::{
    fine_splitting, nuclear_projections, outer_fine_splitting, perturbative_levels, perturbative_transitions,
    PerturbativeLevel,
};
pub use transitions::{transitions, transitions_with_threshold, SelectionRule, TransitionLine, DEFAULT_THRESHOLD};
