// SPDX-License-Identifier: Apache-2.0

//! Electron Rabi nutation with B1-inhomogeneity ensembles.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dynamics::pulse::{relax, SegmentGenerator};
use crate::dynamics::{Channel, InhomogeneityModel, RelaxationParams, RotatingFrame};
use crate::error::{Error, Result};
use crate::hamiltonian::build_static_hamiltonian;
use crate::linalg::trace_product_re;
use crate::species::{FieldConfig, SpeciesParams};
use crate::spectral::{diagonalize, transitions, EigenSystem, SelectionRule};
use crate::spin::{Axis, FactorKind};
use crate::trace::{AxisUnit, SpectrumTrace};
use crate::C64;

/// Rejects empty, non-finite, negative or non-increasing time grids.
pub fn validate_time_grid(times_ns: &[f64]) -> Result<()> {
    if times_ns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if times_ns.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidGrid("finite and non-negative"));
    }
    if times_ns.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("strictly increasing"));
    }
    Ok(())
}

/// Uniform grid `0, step, …, (n−1)·step`.
pub fn uniform_grid(n: usize, step: f64) -> Vec<f64> {
    (0..n).map(|k| k as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RabiParams {
    /// On-resonance nutation frequency, MHz.
    pub nutation_mhz: f64,
    pub times_ns: Vec<f64>,
    pub inhomogeneity: InhomogeneityModel,
    pub relaxation: RelaxationParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RabiResult {
    /// Ensemble-averaged ⟨Sy⟩ of the excited line, in units of its initial polarization.
    pub signal: SpectrumTrace,
    /// Magnitude of the nutating (Sy, Sz) component, same units.
    pub envelope: SpectrumTrace,
    /// Carrier, set to the mean frequency of the excited hyperfine line, MHz.
    pub carrier_mhz: f64,
    /// Nuclear projection of the excited line.
    pub nuclear_m: f64,
}

/// EPR hyperfine group closest to `carrier`: (nuclear projection, mean line frequency).
pub fn resonant_group(eig: &EigenSystem, carrier_mhz: f64) -> Result<(f64, f64)> {
    let lines = transitions(eig, SelectionRule::Epr)?;
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for l in &lines {
        let m = eig.nuclear_m(l.lower);
        match groups.iter_mut().find(|g| g.0 == m) {
            Some(g) => {
                g.1 += l.frequency_mhz;
                g.2 += 1;
            }
            None => groups.push((m, l.frequency_mhz, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(m, sum, n)| (m, sum / n as f64))
        .min_by(|a, b| (a.1 - carrier_mhz).abs().total_cmp(&(b.1 - carrier_mhz).abs()))
        .ok_or(Error::EmptyLines)
}

/// Projects an eigenbasis operator onto states with nuclear projection `m`.
pub(crate) fn project(eig: &EigenSystem, op: &DMatrix<C64>, m: f64) -> DMatrix<C64> {
    let keep: Vec<bool> = (0..eig.dim()).map(|k| eig.nuclear_m(k) == m).collect();
    DMatrix::from_fn(op.nrows(), op.ncols(), |k, l| if keep[k] && keep[l] { op[(k, l)] } else { C64::new(0.0, 0.0) })
}

/// Expectations of `ops` at each time for constant generator `gen`,
/// starting from `rho` (frame eigenbasis).
pub(crate) fn evolve_expectations(
    gen: &SegmentGenerator,
    rho: &DMatrix<C64>,
    ops: &[&DMatrix<C64>],
    times_ns: &[f64],
    relaxation: &RelaxationParams,
    equilibrium: &[f64],
) -> Vec<Vec<f64>> {
    if relaxation.is_off() {
        let (lambda, w) = gen.spectrum();
        let rt = w.adjoint() * rho * w;
        let ot: Vec<DMatrix<C64>> = ops.iter().map(|o| w.adjoint() * *o * w).collect();
        let n = lambda.len();
        times_ns
            .iter()
            .map(|&t| {
                let t_us = t * 1e-3;
                let ph: Vec<C64> =
                    lambda.iter().map(|l| C64::from_polar(1.0, -std::f64::consts::TAU * l * t_us)).collect();
                ot.iter()
                    .map(|o| {
                        let mut acc = 0.0;
                        for k in 0..n {
                            for l in 0..n {
                                acc += (rt[(k, l)] * ph[k] * ph[l].conj() * o[(l, k)]).re;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    } else {
        times_ns
            .iter()
            .map(|&t| {
                let u = gen.unitary(t);
                let mut r = &u * rho * u.adjoint();
                relax(&mut r, equilibrium, relaxation, t);
                ops.iter().map(|o| trace_product_re(&r, o)).collect()
            })
            .collect()
    }
}

/// Rabi nutation of the hyperfine line nearest the field's carrier.
///
/// The carrier is tuned to the mean frequency of that line and only its
/// nuclear sublevel is detected, as with a bandwidth-limited detector. The
/// ensemble average over B1 scale factors uses deterministic quadrature and
/// an ordered reduction, so results do not depend on the thread count.
pub fn simulate_rabi(species: &SpeciesParams, field: &FieldConfig, params: &RabiParams) -> Result<RabiResult> {
    validate_time_grid(&params.times_ns)?;
    params.relaxation.validate()?;
    if !(params.nutation_mhz >= 0.0 && params.nutation_mhz.is_finite()) {
        return Err(Error::param("nutation", format!("must be >= 0, got {}", params.nutation_mhz)));
    }
    let samples = params.inhomogeneity.samples()?;
    let h = build_static_hamiltonian(species, field)?;
    let eig = diagonalize(&h)?;
    let (m, carrier) = resonant_group(&eig, field.carrier_mhz())?;
    if params.nutation_mhz > 0.05 * carrier {
        log::warn!(
            "nutation {} MHz exceeds 5% of the carrier; the rotating-wave approximation is doubtful",
            params.nutation_mhz
        );
    }
    let frame = RotatingFrame::electron(eig.clone(), carrier)?.with_temperature(field.temperature_k)?;
    let rho0 = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        frame.dim(),
        frame.equilibrium.iter().map(|&p| C64::new(p, 0.0)),
    ));
    let sy = project(&eig, &frame.observable(FactorKind::Electron, Axis::Y), m);
    let sz = project(&eig, &frame.observable(FactorKind::Electron, Axis::Z), m);
    let p0 = trace_product_re(&rho0, &sz).abs();
    let norm = if p0 > 0.0 { p0 } else { 1.0 };

    let per_sample: Vec<Result<Vec<Vec<f64>>>> = samples
        .par_iter()
        .map(|&(scale, _)| {
            let gen = SegmentGenerator::new(&frame, Channel::Mw, scale * params.nutation_mhz, 0.0, 0.0)?;
            Ok(evolve_expectations(&gen, &rho0, &[&sy, &sz], &params.times_ns, &params.relaxation, &frame.equilibrium))
        })
        .collect();
    let n = params.times_ns.len();
    let (mut y, mut z) = (vec![0.0; n], vec![0.0; n]);
    for (res, &(_, w)) in per_sample.into_iter().zip(&samples) {
        for (i, v) in res?.into_iter().enumerate() {
            y[i] += w * v[0];
            z[i] += w * v[1];
        }
    }
    let signal: Vec<f64> = y.iter().map(|v| v / norm).collect();
    let envelope: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a.hypot(*b) / norm).collect();
    Ok(RabiResult {
        signal: SpectrumTrace::new(params.times_ns.clone(), signal, AxisUnit::Nanosecond)?,
        envelope: SpectrumTrace::new(params.times_ns.clone(), envelope, AxisUnit::Nanosecond)?,
        carrier_mhz: carrier,
        nuclear_m: m,
    })
}

/// Mean spacing of upward zero crossings (linear interpolation), in axis units.
pub fn oscillation_period(trace: &SpectrumTrace) -> Option<f64> {
    let mean = trace.amplitude.iter().sum::<f64>() / trace.len().max(1) as f64;
    let mut crossings = Vec::new();
    for i in 1..trace.len() {
        let (a, b) = (trace.amplitude[i - 1] - mean, trace.amplitude[i] - mean);
        if a < 0.0 && b >= 0.0 {
            let frac = a / (a - b);
            crossings.push(trace.axis[i - 1] + frac * (trace.axis[i] - trace.axis[i - 1]));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// First time at which a decaying envelope falls to `level` of its initial
/// value (linear interpolation), in axis units.
pub fn decay_time(envelope: &SpectrumTrace, level: f64) -> Option<f64> {
    let e0 = *envelope.amplitude.first()?;
    let target = level * e0;
    envelope.amplitude.windows(2).enumerate().find_map(|(i, w)| {
        (w[0] >= target && w[1] < target).then(|| {
            let frac = (w[0] - target) / (w[0] - w[1]);
            envelope.axis[i] + frac * (envelope.axis[i + 1] - envelope.axis[i])
        })
    })
}
