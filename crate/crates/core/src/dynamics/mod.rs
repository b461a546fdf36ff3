// SPDX-License-Identifier: Apache-2.0

//! Density-matrix propagation in rotating frames: thermal states, pulse
//! sequences with phenomenological relaxation, Rabi nutation ensembles,
//! Hahn-echo envelopes, nuclear Rabi and exchange entanglement.

mod ensemble;
mod entangle;
mod eseem;
pub mod fft;
mod frame;
mod nuclear;
mod pulse;
mod rabi;
mod state;

pub use ensemble::{InhomogeneityModel, DEFAULT_NODES};
pub use entangle::{concurrence, entangling_time, evolve_pure};
pub use eseem::{simulate_eseem, EseemParams, EseemResult};
pub use frame::{rotating_frame, Channel, RotatingFrame};
pub use nuclear::{match_targets, simulate_nuclear_rabi, NuclearRabiParams, NuclearRabiResult, TARGET_WINDOW_MHZ};
pub use pulse::{propagate, relax, Observable, Propagation, PulseSegment, PulseSequence, SegmentGenerator};
pub use rabi::{
    decay_time, oscillation_period, resonant_group, simulate_rabi, uniform_grid, validate_time_grid, RabiParams,
    RabiResult,
};
pub use state::{thermal_state, DensityMatrix, RelaxationParams, HIGH_TEMPERATURE_RATIO};
