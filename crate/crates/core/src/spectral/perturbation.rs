// SPDX-License-Identifier: Apache-2.0

//! High-field perturbative level scheme for an isotropic S·I coupling.
//!
//! First order keeps the secular part: E = ω_e·M_S + ω_I·M_I + a·M_S·M_I.
//! Second order adds the flip-flop term (a/2)(S+I− + S−I+) through
//! Rayleigh–Schrödinger theory with the first-order energies as the
//! unperturbed spectrum. For the ΔM_S = 1 lines this reproduces the extra
//! splitting a²·|M_I|/ω_e between neighbouring fine lines.

use crate::error::{Error, Result};
use crate::species::{FieldConfig, SpeciesParams};
use crate::spectral::TransitionLine;
use crate::spin::SpinQuantumNumber;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeLevel {
    pub ms: f64,
    pub mi: f64,
    pub energy_mhz: f64,
}

fn ladder(j: f64, m: f64, raise: bool) -> f64 {
    let target = if raise { m + 1.0 } else { m - 1.0 };
    if target.abs() > j + 1e-9 {
        return 0.0;
    }
    (j * (j + 1.0) - m * target).max(0.0).sqrt()
}

struct Scheme {
    we: f64,
    wi: f64,
    a: f64,
    s: f64,
    i: f64,
}

impl Scheme {
    fn first(&self, ms: f64, mi: f64) -> f64 {
        self.we * ms + self.wi * mi + self.a * ms * mi
    }

    fn second(&self, ms: f64, mi: f64) -> f64 {
        let e0 = self.first(ms, mi);
        let mut e = e0;
        // |M_S+1, M_I−1⟩ partner
        let up = 0.5 * self.a * ladder(self.s, ms, true) * ladder(self.i, mi, false);
        if up != 0.0 {
            e += up * up / (e0 - self.first(ms + 1.0, mi - 1.0));
        }
        let down = 0.5 * self.a * ladder(self.s, ms, false) * ladder(self.i, mi, true);
        if down != 0.0 {
            e += down * down / (e0 - self.first(ms - 1.0, mi + 1.0));
        }
        e
    }
}

fn scheme(species: &SpeciesParams, field: &FieldConfig) -> Scheme {
    let s = Scheme {
        we: species.electron_larmor(field.b0_mt),
        wi: species.nuclear_larmor(field.b0_mt),
        a: species.hyperfine_mhz,
        s: species.electron_spin.value(),
        i: species.nuclear_spin.value(),
    };
    if s.we.abs() < 20.0 * s.a.abs() {
        log::warn!(
            "electron Zeeman frequency {:.3} MHz is below 20·a = {:.3} MHz; perturbative levels are unreliable",
            s.we,
            20.0 * s.a.abs()
        );
    }
    s
}

/// Perturbative energies in product-basis order (M_S descending, then M_I descending).
pub fn perturbative_levels(species: &SpeciesParams, field: &FieldConfig, order: u8) -> Result<Vec<PerturbativeLevel>> {
    if order != 1 && order != 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    let sc = scheme(species, field);
    let mut out = Vec::new();
    for ms in species.electron_spin.projections() {
        for mi in species.nuclear_spin.projections() {
            let energy_mhz = if order == 1 { sc.first(ms, mi) } else { sc.second(ms, mi) };
            out.push(PerturbativeLevel { ms, mi, energy_mhz });
        }
    }
    Ok(out)
}

/// ΔM_S = 1 lines from the perturbative levels, with high-field intensities
/// |⟨M_S|Sx|M_S−1⟩|² = (S(S+1) − M_S(M_S−1))/4. Indices refer to the
/// product basis.
pub fn perturbative_transitions(
    species: &SpeciesParams,
    field: &FieldConfig,
    order: u8,
) -> Result<Vec<TransitionLine>> {
    let levels = perturbative_levels(species, field, order)?;
    let s = species.electron_spin.value();
    let ni = species.nuclear_spin.multiplicity();
    let mut lines = Vec::new();
    for (k, upper) in levels.iter().enumerate() {
        let lower_idx = k + ni;
        let Some(lower) = levels.get(lower_idx) else { continue };
        let m = upper.ms;
        let intensity = 0.25 * (s * (s + 1.0) - m * (m - 1.0));
        let (lo, hi) = if upper.energy_mhz >= lower.energy_mhz { (lower_idx, k) } else { (k, lower_idx) };
        lines.push(TransitionLine {
            lower: lo,
            upper: hi,
            frequency_mhz: (upper.energy_mhz - lower.energy_mhz).abs(),
            intensity,
            lower_label: vec![lower.ms, lower.mi],
            upper_label: vec![upper.ms, upper.mi],
        });
    }
    lines.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz).then(a.lower.cmp(&b.lower)));
    Ok(lines)
}

/// Leading-order spacing between neighbouring ΔM_S = 1 lines of the
/// hyperfine group `mi`: a²·|M_I|/ω_e (a²/ω_e for M_I = ±1, a²/(2ω_e) for
/// M_I = ±1/2).
pub fn fine_splitting(hyperfine_mhz: f64, electron_larmor_mhz: f64, mi: f64) -> f64 {
    hyperfine_mhz * hyperfine_mhz * mi.abs() / electron_larmor_mhz
}

/// Leading-order fine splitting of the outermost hyperfine group of `species`.
pub fn outer_fine_splitting(species: &SpeciesParams, field: &FieldConfig) -> f64 {
    let mi = species.nuclear_spin.value();
    fine_splitting(species.hyperfine_mhz, species.electron_larmor(field.b0_mt), mi)
}

/// Spin multiplicity helper used by callers grouping lines.
pub fn nuclear_projections(i: SpinQuantumNumber) -> Vec<f64> {
    i.projections().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(lines: &[TransitionLine], mi: f64) -> Vec<f64> {
        let mut f: Vec<f64> = lines.iter().filter(|l| l.lower_label[1] == mi).map(|l| l.frequency_mhz).collect();
        f.sort_by(f64::total_cmp);
        f
    }

    #[test]
    fn rejects_bad_order() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        assert_eq!(perturbative_levels(&s, &f, 3), Err(Error::UnsupportedOrder(3)));
    }

    #[test]
    fn first_order_groups_are_degenerate() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let lines = perturbative_transitions(&s, &f, 1).unwrap();
        for mi in [-1.0, 0.0, 1.0] {
            let g = group(&lines, mi);
            assert!((g[2] - g[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn nc60_second_order_splitting_is_26_khz() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let lines = perturbative_transitions(&s, &f, 2).unwrap();
        for mi in [-1.0, 1.0] {
            let g = group(&lines, mi);
            for w in g.windows(2) {
                let khz = (w[1] - w[0]) * 1e3;
                assert!((khz - 26.0).abs() < 0.5, "{khz}");
            }
        }
        // M_I = 0 lines coincide up to third-order terms (a³/ω_e² scale)
        let g = group(&lines, 0.0);
        assert!((g[2] - g[0]) * 1e3 < 0.5);
        let intens: Vec<f64> = lines.iter().filter(|l| l.lower_label[1] == 1.0).map(|l| l.intensity).collect();
        assert_eq!(intens.len(), 3);
    }

    #[test]
    fn n15_c70_splitting_uses_half_factor() {
        let s = SpeciesParams::preset("15N@C70").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let lines = perturbative_transitions(&s, &f, 2).unwrap();
        let we = s.electron_larmor(f.b0_mt);
        let expect = s.hyperfine_mhz.powi(2) / (2.0 * we);
        for mi in [-0.5, 0.5] {
            let g = group(&lines, mi);
            for w in g.windows(2) {
                assert!(((w[1] - w[0]) - expect).abs() < 0.02 * expect);
            }
        }
        assert!((expect * 1e3 - 23.0).abs() < 0.5, "{}", expect * 1e3);
    }
}
