// SPDX-License-Identifier: Apache-2.0

//! Nuclear Rabi nutation under simultaneous RF carriers.

use nalgebra::DMatrix;

use crate::dynamics::fft::{dominant_peak, fft_magnitude, min_resolvable_khz, uniform_step, DEFAULT_PAD};
use crate::dynamics::pulse::SegmentGenerator;
use crate::dynamics::rabi::{evolve_expectations, validate_time_grid};
use crate::dynamics::{Channel, RelaxationParams, RotatingFrame};
use crate::error::{Error, Result};
use crate::hamiltonian::build_static_hamiltonian;
use crate::species::{FieldConfig, SpeciesParams};
use crate::spectral::{diagonalize, transitions, SelectionRule, TransitionLine};
use crate::spin::{Axis, FactorKind};
use crate::trace::{AxisUnit, SpectrumTrace};
use crate::C64;

/// Largest distance (MHz) between a requested target and a simulated NMR line.
pub const TARGET_WINDOW_MHZ: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct NuclearRabiParams {
    /// RF nutation amplitude per carrier, MHz.
    pub rf_amp_mhz: f64,
    /// Requested transition frequencies, MHz.
    pub targets_mhz: Vec<f64>,
    /// Pulse lengths, ns; must be uniform for the FFT.
    pub times_ns: Vec<f64>,
    pub relaxation: RelaxationParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuclearRabiResult {
    /// Rotating-frame ⟨Iy⟩ on the driven transitions, in units of the
    /// largest coherence their initial populations allow.
    pub signal: SpectrumTrace,
    pub fft: SpectrumTrace,
    /// Simulated lines the carriers were tuned to.
    pub lines: Vec<TransitionLine>,
    /// Dominant nutation frequency, kHz.
    pub rabi_khz: Option<f64>,
}

/// Nearest simulated NMR line to each target, or an error if none lies within 0.5 MHz.
pub fn match_targets(lines: &[TransitionLine], targets_mhz: &[f64]) -> Result<Vec<TransitionLine>> {
    targets_mhz
        .iter()
        .map(|&t| {
            lines
                .iter()
                .min_by(|a, b| (a.frequency_mhz - t).abs().total_cmp(&(b.frequency_mhz - t).abs()))
                .filter(|l| (l.frequency_mhz - t).abs() <= TARGET_WINDOW_MHZ)
                .cloned()
                .ok_or(Error::NoMatchingTransition(t))
        })
        .collect()
}

/// Drives the target NMR transitions simultaneously and records the
/// nuclear coherence against pulse length.
pub fn simulate_nuclear_rabi(
    species: &SpeciesParams,
    field: &FieldConfig,
    params: &NuclearRabiParams,
) -> Result<NuclearRabiResult> {
    validate_time_grid(&params.times_ns)?;
    uniform_step(&params.times_ns)?;
    params.relaxation.validate()?;
    if !(params.rf_amp_mhz >= 0.0 && params.rf_amp_mhz.is_finite()) {
        return Err(Error::param("rf_amp", format!("must be >= 0, got {}", params.rf_amp_mhz)));
    }
    if params.targets_mhz.is_empty() {
        return Err(Error::param("targets", "at least one target transition is required"));
    }
    let h = build_static_hamiltonian(species, field)?;
    let eig = diagonalize(&h)?;
    let nmr = transitions(&eig, SelectionRule::Nmr)?;
    let lines = match_targets(&nmr, &params.targets_mhz)?;
    let carriers: Vec<f64> = lines.iter().map(|l| l.frequency_mhz).collect();
    let frame = RotatingFrame::nuclear(eig, &carriers)?.with_temperature(field.temperature_k)?;
    if carriers.iter().any(|c| params.rf_amp_mhz > 0.05 * c) {
        log::warn!(
            "RF amplitude {} MHz exceeds 5% of a carrier; the rotating-wave approximation is doubtful",
            params.rf_amp_mhz
        );
    }
    let rho0 = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        frame.dim(),
        frame.equilibrium.iter().map(|&p| C64::new(p, 0.0)),
    ));
    let iy = frame.observable(FactorKind::Nucleus, Axis::Y);
    let ix = frame.observable(FactorKind::Nucleus, Axis::X);
    // largest coherence reachable: Σ over driven pairs of |Δp|·|I_kl|
    let mut scale = 0.0;
    for k in 0..frame.dim() {
        for l in 0..k {
            scale += (frame.equilibrium[k] - frame.equilibrium[l]).abs() * ix[(k, l)].norm();
        }
    }
    let norm = if scale > 0.0 { scale } else { 1.0 };
    let gen = SegmentGenerator::new(&frame, Channel::Rf, params.rf_amp_mhz, 0.0, 0.0)?;
    let values = evolve_expectations(&gen, &rho0, &[&iy], &params.times_ns, &params.relaxation, &frame.equilibrium);
    let signal: Vec<f64> = values.iter().map(|v| v[0] / norm).collect();
    let signal = SpectrumTrace::new(params.times_ns.clone(), signal, AxisUnit::Nanosecond)?;
    let fft = fft_magnitude(&signal, DEFAULT_PAD)?;
    let rabi_khz =
        if params.rf_amp_mhz > 0.0 { dominant_peak(&fft, min_resolvable_khz(&signal.axis)).map(|p| p.0) } else { None };
    Ok(NuclearRabiResult { signal, fft, lines, rabi_khz })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::rabi::uniform_grid;

    fn run(rf: f64) -> NuclearRabiResult {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let p = NuclearRabiParams {
            rf_amp_mhz: rf,
            targets_mhz: vec![22.597, 24.781],
            times_ns: uniform_grid(1024, 2000.0),
            relaxation: RelaxationParams::none(),
        };
        simulate_nuclear_rabi(&s, &f, &p).unwrap()
    }

    #[test]
    fn targets_snap_to_outer_manifolds() {
        let r = run(0.005);
        assert_eq!(r.lines.len(), 2);
        for l in &r.lines {
            assert_eq!(l.lower_label[0].abs(), 1.5);
        }
        assert!((r.lines[0].frequency_mhz - 22.597).abs() < 0.3);
        assert!((r.lines[1].frequency_mhz - 24.781).abs() < 0.3);
    }

    #[test]
    fn rabi_frequency_scales_with_power() {
        let a = run(0.005).rabi_khz.unwrap();
        let b = run(0.010).rabi_khz.unwrap();
        assert!((b / a - 2.0).abs() < 0.04, "{a} {b}");
    }

    #[test]
    fn zero_amplitude_is_flat() {
        let r = run(0.0);
        assert!(r.signal.amplitude.iter().all(|v| v.abs() < 1e-12));
        assert!(r.rabi_khz.is_none());
    }

    #[test]
    fn unmatched_target_rejected() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let p = NuclearRabiParams {
            rf_amp_mhz: 0.01,
            targets_mhz: vec![40.0],
            times_ns: uniform_grid(16, 10.0),
            relaxation: RelaxationParams::none(),
        };
        assert_eq!(simulate_nuclear_rabi(&s, &f, &p), Err(Error::NoMatchingTransition(40.0)));
    }
}
