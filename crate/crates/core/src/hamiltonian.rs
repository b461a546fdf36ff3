// SPDX-License-Identifier: Apache-2.0

//! Static laboratory-frame spin Hamiltonians, in MHz.

use crate::constants::{dipolar_constant, G_C13, G_NC60, NUCLEAR_MAGNETON_OVER_H};
use crate::error::{Error, Result};
use crate::species::{FieldConfig, SpeciesParams};
use crate::spin::{Axis, Basis, Factor, FactorKind, SpinOperator, SpinQuantumNumber};

/// H = ω_e·Sz + ω_I·Iz + a·(SxIx + SyIy + SzIz), basis (S, I).
pub fn build_static_hamiltonian(species: &SpeciesParams, field: &FieldConfig) -> Result<SpinOperator> {
    species.validate()?;
    field.validate()?;
    let basis = Basis::electron_nuclear(species.electron_spin, &[species.nuclear_spin])?;
    Ok(single_molecule(species, field, &basis, 0))
}

/// Hamiltonian of one molecule whose electron sits at `offset` inside `basis`
/// and whose nitrogen nucleus is the next factor.
fn single_molecule(species: &SpeciesParams, field: &FieldConfig, basis: &Basis, offset: usize) -> SpinOperator {
    let we = species.electron_larmor(field.b0_mt);
    let wi = species.nuclear_larmor(field.b0_mt);
    let sz = basis.component(offset, Axis::Z);
    let iz = basis.component(offset + 1, Axis::Z);
    let mut h = &(&sz * we) + &(&iz * wi);
    let hf = isotropic_coupling(basis, offset, offset + 1);
    h = &h + &(&hf * species.hyperfine_mhz);
    h
}

/// A·B between the factors at positions `p` and `q`.
fn isotropic_coupling(basis: &Basis, p: usize, q: usize) -> SpinOperator {
    let mut acc = SpinOperator::zeros(basis.clone());
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        acc = &acc + &(&basis.component(p, axis) * &basis.component(q, axis));
    }
    acc
}

/// A molecule extended by `n13` ¹³C cage nuclei, each coupled isotropically
/// to the electron with constant `a13_mhz`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSpecies {
    pub base: SpeciesParams,
    pub a13_mhz: f64,
    pub n13: usize,
}

/// Describes the ¹³C-extended molecule; `n13` is limited to 0, 1 or 2.
pub fn add_c13(species: &SpeciesParams, a13_mhz: f64, n13: usize) -> Result<ExtendedSpecies> {
    if n13 > 2 {
        return Err(Error::param("n13", format!("at most 2 cage nuclei are supported, got {n13}")));
    }
    if !(a13_mhz > 0.0 && a13_mhz.is_finite()) {
        return Err(Error::param("a13", format!("must be positive, got {a13_mhz}")));
    }
    Ok(ExtendedSpecies { base: species.clone(), a13_mhz, n13 })
}

impl ExtendedSpecies {
    pub fn basis(&self) -> Result<Basis> {
        let mut nuclei = vec![self.base.nuclear_spin];
        nuclei.extend(std::iter::repeat_n(SpinQuantumNumber::HALF, self.n13));
        Basis::electron_nuclear(self.base.electron_spin, &nuclei)
    }

    pub fn hamiltonian(&self, field: &FieldConfig) -> Result<SpinOperator> {
        if self.n13 == 0 {
            return build_static_hamiltonian(&self.base, field);
        }
        self.base.validate()?;
        field.validate()?;
        let basis = self.basis()?;
        let mut h = single_molecule(&self.base, field, &basis, 0);
        let wc = G_C13 * NUCLEAR_MAGNETON_OVER_H * field.b0_mt;
        for k in 0..self.n13 {
            let pos = 2 + k;
            h = &h + &(&basis.component(pos, Axis::Z) * wc);
            h = &h + &(&isotropic_coupling(&basis, 0, pos) * self.a13_mhz);
        }
        Ok(h)
    }
}

/// Electron–electron coupling of a dimer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingSpec {
    /// Isotropic exchange J, MHz.
    pub exchange_mhz: f64,
    pub dipolar: Option<Dipolar>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dipolar {
    /// Secular coefficient D in MHz.
    Coefficient(f64),
    /// Inter-spin distance in nm, converted with the point-dipole formula.
    Distance(f64),
}

impl CouplingSpec {
    pub fn exchange(j_mhz: f64) -> Self {
        CouplingSpec { exchange_mhz: j_mhz, dipolar: None }
    }

    /// Resolved secular dipolar coefficient for electrons with g-factors `g_a`, `g_b`.
    pub fn dipolar_mhz(&self, g_a: f64, g_b: f64) -> Result<f64> {
        match self.dipolar {
            None => Ok(0.0),
            Some(Dipolar::Coefficient(d)) => Ok(d),
            Some(Dipolar::Distance(r)) => dipolar_coupling_for(r, g_a, g_b),
        }
    }
}

/// H = H_A⊗1 + 1⊗H_B + J·S_A·S_B + D·(S_Az S_Bz − (S_Ax S_Bx + S_Ay S_By)/2),
/// basis (S_A, I_A, S_B, I_B).
pub fn build_dimer_hamiltonian(
    a: &SpeciesParams,
    b: &SpeciesParams,
    coupling: &CouplingSpec,
    field: &FieldConfig,
) -> Result<SpinOperator> {
    a.validate()?;
    b.validate()?;
    field.validate()?;
    let dim = a.electron_spin.multiplicity()
        * a.nuclear_spin.multiplicity()
        * b.electron_spin.multiplicity()
        * b.nuclear_spin.multiplicity();
    if dim > crate::constants::MAX_DIMENSION {
        return Err(Error::DimensionOverflow(dim));
    }
    let basis = Basis::new(vec![
        Factor { spin: a.electron_spin, kind: FactorKind::Electron },
        Factor { spin: a.nuclear_spin, kind: FactorKind::Nucleus },
        Factor { spin: b.electron_spin, kind: FactorKind::Electron },
        Factor { spin: b.nuclear_spin, kind: FactorKind::Nucleus },
    ])?;
    let mut h = &single_molecule(a, field, &basis, 0) + &single_molecule(b, field, &basis, 2);
    if coupling.exchange_mhz != 0.0 {
        h = &h + &(&isotropic_coupling(&basis, 0, 2) * coupling.exchange_mhz);
    }
    let d = coupling.dipolar_mhz(a.g, b.g)?;
    if d != 0.0 {
        let zz = &basis.component(0, Axis::Z) * &basis.component(2, Axis::Z);
        let xx = &basis.component(0, Axis::X) * &basis.component(2, Axis::X);
        let yy = &basis.component(0, Axis::Y) * &basis.component(2, Axis::Y);
        let flip = &(&xx + &yy) * 0.5;
        h = &h + &(&(&zz - &flip) * d);
    }
    Ok(h)
}

/// Point-dipole coupling c_dd / r³ in MHz for two N@C60 electrons at `distance_nm`.
pub fn dipolar_coupling(distance_nm: f64) -> Result<f64> {
    dipolar_coupling_for(distance_nm, G_NC60, G_NC60)
}

/// Point-dipole coupling (μ0/4π)·g_a·g_b·β²/(h·r³), MHz.
pub fn dipolar_coupling_for(distance_nm: f64, g_a: f64, g_b: f64) -> Result<f64> {
    if !(distance_nm > 0.0 && distance_nm.is_finite()) {
        return Err(Error::param("distance", format!("must be positive, got {distance_nm}")));
    }
    Ok(dipolar_constant(g_a, g_b) / distance_nm.powi(3))
}
