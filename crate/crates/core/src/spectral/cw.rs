// SPDX-License-Identifier: Apache-2.0

//! CW-EPR trace synthesis.
//!
//! Lines are placed on a field axis by linearizing around the carrier,
//! B = B0 + (ν_mw − ν)/(g·β/h), or used directly on a frequency axis.
//! Each line contributes a unit-area lineshape (or its first derivative)
//! whose peak-to-peak derivative width is the requested linewidth.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::constants::electron_zeeman_factor;
use crate::error::{Error, Result};
use crate::hamiltonian::add_c13;
use crate::species::{FieldConfig, SpeciesParams};
use crate::spectral::{diagonalize, transitions, SelectionRule, TransitionLine};
use crate::trace::{AxisUnit, Lineshape, SpectrumTrace, TraceMeta};

/// Uniform sampling grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && stop > start) {
            return Err(Error::InvalidGrid("a finite range with stop > start"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidGrid("sampled with a positive step"));
        }
        Ok(AxisSpec { start, stop, step })
    }

    /// Smallest step-aligned range containing `positions` with `margin` on each side.
    pub fn covering(positions: &[f64], margin: f64, step: f64) -> Result<Self> {
        let lo = positions.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = positions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return Err(Error::EmptyLines);
        }
        let start = ((lo - margin) / step).floor() * step;
        let n = ((hi + margin - start) / step).ceil().max(1.0);
        AxisSpec::new(start, start + n * step, step)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// How transition frequencies map onto the spectrum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    /// Field sweep at fixed carrier; the axis is in mT.
    Field { b0_mt: f64, carrier_mhz: f64, g: f64 },
    /// Frequency sweep; the axis is in MHz.
    Frequency,
}

impl SweepMode {
    pub fn field(field: &FieldConfig, g: f64) -> Self {
        SweepMode::Field { b0_mt: field.b0_mt, carrier_mhz: field.carrier_mhz(), g }
    }

    pub fn unit(&self) -> AxisUnit {
        match self {
            SweepMode::Field { .. } => AxisUnit::Millitesla,
            SweepMode::Frequency => AxisUnit::Megahertz,
        }
    }

    fn position(&self, frequency_mhz: f64, g: Option<f64>) -> f64 {
        match *self {
            SweepMode::Field { b0_mt, carrier_mhz, g: g0 } => {
                b0_mt + (carrier_mhz - frequency_mhz) / electron_zeeman_factor(g.unwrap_or(g0))
            }
            SweepMode::Frequency => frequency_mhz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwParams {
    /// Peak-to-peak derivative linewidth in axis units.
    pub linewidth_pp: f64,
    pub axis: AxisSpec,
    pub derivative: bool,
    pub lineshape: Lineshape,
    pub sweep: SweepMode,
}

impl CwParams {
    fn validate(&self) -> Result<()> {
        if !(self.linewidth_pp > 0.0 && self.linewidth_pp.is_finite()) {
            return Err(Error::param("linewidth", format!("must be positive, got {}", self.linewidth_pp)));
        }
        if self.axis.step > self.linewidth_pp / 4.0 {
            return Err(Error::AxisTooCoarse { step: self.axis.step, linewidth: self.linewidth_pp });
        }
        Ok(())
    }
}

fn shape(kind: Lineshape, derivative: bool, width_pp: f64, x: f64) -> f64 {
    match kind {
        Lineshape::Gaussian => {
            // derivative extrema at ±σ
            let sigma = 0.5 * width_pp;
            let g = (-0.5 * (x / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt());
            if derivative {
                -x / (sigma * sigma) * g
            } else {
                g
            }
        }
        Lineshape::Lorentzian => {
            // derivative extrema at ±γ/√3
            let gamma = 0.5 * 3f64.sqrt() * width_pp;
            let d = x * x + gamma * gamma;
            if derivative {
                -2.0 * x * gamma / (PI * d * d)
            } else {
                gamma / (PI * d)
            }
        }
    }
}

/// Axis positions and intensities of `lines` under `sweep`.
pub fn line_positions(lines: &[TransitionLine], sweep: &SweepMode) -> Vec<(f64, f64)> {
    lines.iter().map(|l| (sweep.position(l.frequency_mhz, None), l.intensity)).collect()
}

fn synthesize_points(points: &[(f64, f64)], params: &CwParams) -> Result<SpectrumTrace> {
    if points.is_empty() {
        return Err(Error::EmptyLines);
    }
    params.validate()?;
    let axis = params.axis.points();
    let (start, stop) = (axis[0], *axis.last().unwrap_or(&axis[0]));
    if let Some(&(position, _)) = points.iter().find(|(p, _)| *p < start || *p > stop) {
        return Err(Error::LineOutsideAxis { position, start, stop });
    }
    let amplitude: Vec<f64> = axis
        .par_iter()
        .map(|&x| {
            points
                .iter()
                .map(|&(p, i)| i * shape(params.lineshape, params.derivative, params.linewidth_pp, x - p))
                .sum()
        })
        .collect();
    Ok(SpectrumTrace::new(axis, amplitude, params.sweep.unit())?.with_meta(TraceMeta {
        lineshape: Some(params.lineshape),
        linewidth: Some(params.linewidth_pp),
        derivative: params.derivative,
    }))
}

/// Sum of intensity-weighted unit-area lineshapes centred on each line.
pub fn synthesize_cw_spectrum(lines: &[TransitionLine], params: &CwParams) -> Result<SpectrumTrace> {
    synthesize_points(&line_positions(lines, &params.sweep), params)
}

/// Binomial isotopologue probabilities P(k) = C(n,k)·p^k·(1−p)^(n−k), k = 0…max_k.
pub fn isotopologue_weights(abundance: f64, n_sites: u32, max_k: u32) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&abundance) {
        return Err(Error::param("abundance", format!("must lie in [0, 1], got {abundance}")));
    }
    if max_k > n_sites {
        return Err(Error::param("max_k", format!("{max_k} exceeds the {n_sites} available sites")));
    }
    let n = n_sites as i32;
    let mut binom = 1.0;
    Ok((0..=max_k as i32)
        .map(|k| {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            binom * abundance.powi(k) * (1.0 - abundance).powi(n - k)
        })
        .collect())
}

/// ¹³C content of one mixture component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum C13Profile {
    /// Only the all-¹²C cage.
    None,
    /// Binomial isotopologues with up to `max_k` (≤ 2) ¹³C nuclei.
    Binomial { abundance: f64, a13_mhz: f64, max_k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    pub species: SpeciesParams,
    pub weight: f64,
    pub c13: C13Profile,
}

impl MixtureComponent {
    pub fn pure(species: SpeciesParams, weight: f64) -> Self {
        MixtureComponent { species, weight, c13: C13Profile::None }
    }

    /// Axis positions and intensities of all isotopologue lines of this
    /// component, scaled by isotopologue probability (not by `weight`).
    pub fn line_points(&self, field: &FieldConfig, sweep: &SweepMode) -> Result<Vec<(f64, f64)>> {
        let profile: Vec<(usize, f64, f64)> = match self.c13 {
            C13Profile::None => vec![(0, 1.0, 0.0)],
            C13Profile::Binomial { abundance, a13_mhz, max_k } => {
                isotopologue_weights(abundance, self.species.cage_carbons, max_k)?
                    .into_iter()
                    .enumerate()
                    .map(|(k, p)| (k, p, a13_mhz))
                    .collect()
            }
        };
        let mut out = Vec::new();
        for (k, p, a13) in profile {
            let h = if k == 0 {
                crate::hamiltonian::build_static_hamiltonian(&self.species, field)?
            } else {
                add_c13(&self.species, a13, k)?.hamiltonian(field)?
            };
            let lines = transitions(&diagonalize(&h)?, SelectionRule::Epr)?;
            out.extend(lines.iter().map(|l| (sweep.position(l.frequency_mhz, Some(self.species.g)), p * l.intensity)));
        }
        Ok(out)
    }
}

/// Weighted superposition of per-component spectra, normalized by the total weight.
pub fn composite_spectrum(
    components: &[MixtureComponent],
    field: &FieldConfig,
    params: &CwParams,
) -> Result<SpectrumTrace> {
    if components.is_empty() {
        return Err(Error::EmptyLines);
    }
    if components.iter().any(|c| !(c.weight >= 0.0 && c.weight.is_finite())) {
        return Err(Error::param("weight", "mixture weights must be finite and non-negative"));
    }
    let total: f64 = components.iter().map(|c| c.weight).sum();
    if !(total > 0.0) {
        return Err(Error::param("weight", "at least one mixture weight must be positive"));
    }
    let mut acc: Option<SpectrumTrace> = None;
    for c in components {
        let trace = synthesize_points(&c.line_points(field, &params.sweep)?, params)?;
        let scale = c.weight / total;
        match acc.as_mut() {
            None => {
                let mut t = trace;
                t.amplitude.iter_mut().for_each(|y| *y *= scale);
                acc = Some(t);
            }
            Some(a) => a.amplitude.iter_mut().zip(&trace.amplitude).for_each(|(y, t)| *y += scale * t),
        }
    }
    acc.ok_or(Error::EmptyLines)
}
