// SPDX-License-Identifier: Apache-2.0

//! Two-pulse (Hahn) echo envelope with ideal instantaneous pulses.
//!
//! The echo is sampled at 2τ and the envelope is reported against that
//! echo time. A coherence on the M_S = 3/2↔1/2 line is mapped by the π
//! pulse onto the −1/2↔−3/2 line; within an M_I = ±1 group these differ by
//! 2δ = 2a²/ω_e, so the echo phase advances by 2δ·τ = δ·(2τ) and the
//! envelope modulates at δ on the echo-time axis.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dynamics::fft::{dominant_peak, fft_magnitude, min_resolvable_khz, uniform_step, DEFAULT_PAD};
use crate::dynamics::rabi::validate_time_grid;
use crate::dynamics::RotatingFrame;
use crate::error::{Error, Result};
use crate::hamiltonian::build_static_hamiltonian;
use crate::linalg::{conjugate, trace_product_re, HermitianEigen};
use crate::species::{FieldConfig, SpeciesParams};
use crate::spectral::diagonalize;
use crate::spin::{Axis, FactorKind};
use crate::trace::{AxisUnit, SpectrumTrace};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct EseemParams {
    /// Inter-pulse delays τ, ns; must be uniform for the FFT.
    pub tau_ns: Vec<f64>,
    /// Flip angles of the two pulses, radians.
    pub flip_angles: (f64, f64),
    /// Phases of the two pulses, radians.
    pub phases: (f64, f64),
    /// Zero-padding factor of the FFT.
    pub zero_pad: usize,
}

impl EseemParams {
    pub fn hahn(tau_ns: Vec<f64>) -> Self {
        EseemParams { tau_ns, flip_angles: (FRAC_PI_2, PI), phases: (0.0, 0.0), zero_pad: DEFAULT_PAD }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EseemResult {
    /// Echo ⟨Sy⟩ against echo time 2τ (ns), in units of the initial polarization.
    pub echo: SpectrumTrace,
    /// Magnitude spectrum of the echo envelope (kHz).
    pub fft: SpectrumTrace,
    /// Dominant modulation frequency (kHz) and its magnitude, if any.
    pub peak: Option<(f64, f64)>,
}

fn rotation(frame: &RotatingFrame, angle: f64, phase: f64) -> DMatrix<C64> {
    HermitianEigen::new(&frame.drive(phase)).apply(|l| C64::from_polar(1.0, -angle * l))
}

fn free(rho: &DMatrix<C64>, offsets: &[f64], t_ns: f64) -> DMatrix<C64> {
    let t_us = t_ns * 1e-3;
    let ph: Vec<C64> = offsets.iter().map(|e| C64::from_polar(1.0, -TAU * e * t_us)).collect();
    DMatrix::from_fn(rho.nrows(), rho.ncols(), |k, l| rho[(k, l)] * ph[k] * ph[l].conj())
}

/// Simulates the echo envelope and its spectrum.
pub fn simulate_eseem(species: &SpeciesParams, field: &FieldConfig, params: &EseemParams) -> Result<EseemResult> {
    validate_time_grid(&params.tau_ns)?;
    uniform_step(&params.tau_ns)?;
    if params.zero_pad == 0 {
        return Err(Error::param("zero_pad", "must be >= 1"));
    }
    let h = build_static_hamiltonian(species, field)?;
    let frame =
        RotatingFrame::electron(diagonalize(&h)?, field.carrier_mhz())?.with_temperature(field.temperature_k)?;
    let rho0 = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        frame.dim(),
        frame.equilibrium.iter().map(|&p| C64::new(p, 0.0)),
    ));
    let sy = frame.observable(FactorKind::Electron, Axis::Y);
    let sz = frame.observable(FactorKind::Electron, Axis::Z);
    let p0 = trace_product_re(&rho0, &sz).abs();
    let norm = if p0 > 0.0 { p0 } else { 1.0 };
    let r1 = rotation(&frame, params.flip_angles.0, params.phases.0);
    let r2 = rotation(&frame, params.flip_angles.1, params.phases.1);
    let rho1 = conjugate(&r1, &rho0);
    let echo: Vec<f64> = params
        .tau_ns
        .par_iter()
        .map(|&tau| {
            let a = free(&rho1, &frame.offsets, tau);
            let b = free(&conjugate(&r2, &a), &frame.offsets, tau);
            trace_product_re(&b, &sy) / norm
        })
        .collect();
    let axis: Vec<f64> = params.tau_ns.iter().map(|t| 2.0 * t).collect();
    let echo = SpectrumTrace::new(axis, echo, AxisUnit::Nanosecond)?;
    let (fft, peak) = if echo.len() >= 2 {
        let fft = fft_magnitude(&echo, params.zero_pad)?;
        let peak = dominant_peak(&fft, min_resolvable_khz(&echo.axis));
        (fft, peak)
    } else {
        return Err(Error::InvalidGrid("at least two points long"));
    };
    Ok(EseemResult { echo, fft, peak })
}
