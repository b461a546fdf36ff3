// SPDX-License-Identifier: Apache-2.0

use crate::constants::electron_zeeman_factor;
use crate::error::{Error, Result};
use crate::spectral::EigenSystem;
use crate::spin::{Axis, FactorKind};

/// Relative intensity below which a candidate line is discarded.
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    /// Driven by electron Sx: one electron projection changes by ±1, nuclei fixed.
    Epr,
    /// Driven by nuclear Ix: one nuclear projection changes by ±1, electrons fixed.
    Nmr,
}

/// One allowed transition between two eigenstates.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionLine {
    /// Index of the lower-energy level.
    pub lower: usize,
    /// Index of the upper-energy level.
    pub upper: usize,
    /// |E_upper − E_lower|, MHz.
    pub frequency_mhz: f64,
    /// |⟨upper|X|lower⟩|².
    pub intensity: f64,
    pub lower_label: Vec<f64>,
    pub upper_label: Vec<f64>,
}

impl TransitionLine {
    /// Resonance field of this line in a field sweep at fixed carrier,
    /// linearized around `b0_mt`: B = B0 + (ν_mw − ν)/(g·β/h).
    pub fn resonance_field(&self, b0_mt: f64, carrier_mhz: f64, g: f64) -> f64 {
        b0_mt + (carrier_mhz - self.frequency_mhz) / electron_zeeman_factor(g)
    }
}

fn allowed(lower: &[f64], upper: &[f64], kinds: &[FactorKind], driven: FactorKind) -> bool {
    let mut changed = 0;
    for ((a, b), kind) in lower.iter().zip(upper).zip(kinds) {
        let d = (b - a).abs();
        if d == 0.0 {
            continue;
        }
        if *kind != driven || (d - 1.0).abs() > 1e-9 {
            return false;
        }
        changed += 1;
    }
    changed == 1
}

/// Enumerates allowed transitions with the default relative threshold.
pub fn transitions(eig: &EigenSystem, rule: SelectionRule) -> Result<Vec<TransitionLine>> {
    transitions_with_threshold(eig, rule, DEFAULT_THRESHOLD)
}

/// Enumerates transitions whose dominant labels satisfy `rule` and whose
/// intensity exceeds `threshold` times the strongest matrix element.
pub fn transitions_with_threshold(
    eig: &EigenSystem,
    rule: SelectionRule,
    threshold: f64,
) -> Result<Vec<TransitionLine>> {
    let driven = match rule {
        SelectionRule::Epr => FactorKind::Electron,
        SelectionRule::Nmr => FactorKind::Nucleus,
    };
    let kinds: Vec<FactorKind> = eig.basis.factors().iter().map(|f| f.kind).collect();
    let driven_active = eig.basis.factors().iter().any(|f| f.kind == driven && f.spin.multiplicity() > 1);
    if !driven_active || eig.labels.len() != eig.dim() {
        return Err(Error::param("eigensystem", format!("basis has no {driven:?} factor to drive")));
    }
    let op = eig.to_eigenbasis(&eig.basis.total(driven, Axis::X).matrix);
    let n = eig.dim();
    let mut max_amp: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            max_amp = max_amp.max(op[(j, i)].norm_sqr());
        }
    }
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let amp = op[(j, i)].norm_sqr();
            if amp <= threshold * max_amp {
                continue;
            }
            if !allowed(&eig.labels[i], &eig.labels[j], &kinds, driven) {
                continue;
            }
            lines.push(TransitionLine {
                lower: i,
                upper: j,
                frequency_mhz: (eig.energies[j] - eig.energies[i]).abs(),
                intensity: amp,
                lower_label: eig.labels[i].clone(),
                upper_label: eig.labels[j].clone(),
            });
        }
    }
    lines.sort_by(|a, b| {
        a.frequency_mhz.total_cmp(&b.frequency_mhz).then(a.lower.cmp(&b.lower)).then(a.upper.cmp(&b.upper))
    });
    Ok(lines)
}
