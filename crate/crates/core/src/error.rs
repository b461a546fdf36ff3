// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number {0}: must be a non-negative half-integer no larger than 7/2")]
    InvalidSpin(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Hilbert-space dimension {0} exceeds the supported maximum")]
    DimensionOverflow(usize),
    #[error("operator is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("unknown species preset `{0}`")]
    UnknownPreset(String),
    #[error("unsupported perturbation order {0} (expected 1 or 2)")]
    UnsupportedOrder(u8),
    #[error("transition list is empty")]
    EmptyLines,
    #[error("axis step {step} exceeds a quarter of the linewidth {linewidth}")]
    AxisTooCoarse { step: f64, linewidth: f64 },
    #[error("line at {position} lies outside the axis [{start}, {stop}]")]
    LineOutsideAxis { position: f64, start: f64, stop: f64 },
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid must be {0}")]
    InvalidGrid(&'static str),
    #[error("relaxation parameters violate T1 >= T2/2 (T1 = {t1} ms, T2 = {t2} ms)")]
    Unphysical { t1: f64, t2: f64 },
    #[error("no NMR line within 0.5 MHz of requested {0} MHz")]
    NoMatchingTransition(f64),
    #[error("trace is invalid: {0}")]
    InvalidTrace(String),
    #[error("density matrix is invalid: {0}")]
    InvalidState(String),
    #[error("preset table could not be parsed: {0}")]
    PresetTable(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
