// SPDX-License-Identifier: Apache-2.0

//! Species parameters, the built-in preset table and field configuration.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::constants::{electron_zeeman_factor, gauss_to_mhz, NUCLEAR_MAGNETON_OVER_H};
use crate::error::{Error, Result};
use crate::spin::SpinQuantumNumber;

/// Raw preset table shipped with the crate.
pub const PRESETS_TOML: &str = include_str!("../data/presets.toml");

/// Spin quantum numbers, g-factors and hyperfine constant of one species.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesParams {
    pub name: String,
    pub electron_spin: SpinQuantumNumber,
    pub nuclear_spin: SpinQuantumNumber,
    /// Electron g-factor.
    pub g: f64,
    /// Nuclear g-factor (signed).
    pub nuclear_g: f64,
    /// Isotropic hyperfine constant, MHz.
    pub hyperfine_mhz: f64,
    /// Carbon sites on the cage, used for ¹³C isotopologue statistics.
    pub cage_carbons: u32,
}

impl SpeciesParams {
    pub fn new(
        name: impl Into<String>,
        electron_spin: SpinQuantumNumber,
        nuclear_spin: SpinQuantumNumber,
        g: f64,
        nuclear_g: f64,
        hyperfine_mhz: f64,
    ) -> Result<Self> {
        let p = SpeciesParams {
            name: name.into(),
            electron_spin,
            nuclear_spin,
            g,
            nuclear_g,
            hyperfine_mhz,
            cage_carbons: 60,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::param("g", format!("must be positive, got {}", self.g)));
        }
        if !self.nuclear_g.is_finite() || !self.hyperfine_mhz.is_finite() {
            return Err(Error::param("hyperfine", "must be finite"));
        }
        Ok(())
    }

    /// Looks up a built-in preset by name (`14N@C60`, `15N@C60`, `14N@C70`, `15N@C70`).
    pub fn preset(name: &str) -> Result<Self> {
        presets()
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
            .cloned()
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }

    /// Electron Zeeman frequency at `b0_mt`, MHz.
    pub fn electron_larmor(&self, b0_mt: f64) -> f64 {
        electron_zeeman_factor(self.g) * b0_mt
    }

    /// Nuclear Zeeman frequency g_I·(β_n/h)·B0, MHz (signed).
    pub fn nuclear_larmor(&self, b0_mt: f64) -> f64 {
        self.nuclear_g * NUCLEAR_MAGNETON_OVER_H * b0_mt
    }

    /// Copy with the hyperfine constant replaced.
    pub fn with_hyperfine(&self, hyperfine_mhz: f64) -> Self {
        SpeciesParams { hyperfine_mhz, ..self.clone() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    species: Vec<PresetEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetEntry {
    name: String,
    cage_carbons: u32,
    electron_spin: f64,
    nuclear_spin: f64,
    g: f64,
    nuclear_g: f64,
    hyperfine_gauss: f64,
    cage_factor: f64,
}

/// Parses a preset table in the shipped TOML layout.
pub fn parse_presets(text: &str) -> Result<Vec<SpeciesParams>> {
    let file: PresetFile = toml::from_str(text).map_err(|e| Error::PresetTable(e.to_string()))?;
    file.species
        .into_iter()
        .map(|e| {
            let p = SpeciesParams {
                name: e.name,
                electron_spin: SpinQuantumNumber::new(e.electron_spin)?,
                nuclear_spin: SpinQuantumNumber::new(e.nuclear_spin)?,
                g: e.g,
                nuclear_g: e.nuclear_g,
                hyperfine_mhz: gauss_to_mhz(e.hyperfine_gauss * e.cage_factor, e.g),
                cage_carbons: e.cage_carbons,
            };
            p.validate()?;
            Ok(p)
        })
        .collect()
}

/// The built-in presets, parsed once.
pub fn presets() -> &'static [SpeciesParams] {
    static TABLE: OnceLock<Vec<SpeciesParams>> = OnceLock::new();
    TABLE.get_or_init(|| parse_presets(PRESETS_TOML).expect("shipped preset table is valid"))
}

/// Static field, microwave carrier and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// Static field B0, mT.
    pub b0_mt: f64,
    /// Microwave carrier, GHz.
    pub mw_freq_ghz: f64,
    /// Sample temperature, K.
    pub temperature_k: f64,
}

impl FieldConfig {
    pub fn new(b0_mt: f64, mw_freq_ghz: f64) -> Result<Self> {
        let f = FieldConfig { b0_mt, mw_freq_ghz, temperature_k: 300.0 };
        f.validate()?;
        Ok(f)
    }

    /// Field tuned to the bare electron Zeeman resonance of `g` at `mw_freq_ghz`.
    pub fn resonant(mw_freq_ghz: f64, g: f64) -> Result<Self> {
        FieldConfig::new(field_for_resonance(mw_freq_ghz, g)?, mw_freq_ghz)
    }

    pub fn with_temperature(mut self, temperature_k: f64) -> Result<Self> {
        self.temperature_k = temperature_k;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b0_mt >= 0.0 && self.b0_mt.is_finite()) {
            return Err(Error::param("b0", format!("must be >= 0, got {}", self.b0_mt)));
        }
        if !(self.mw_freq_ghz > 0.0 && self.mw_freq_ghz.is_finite()) {
            return Err(Error::param("mw_freq", format!("must be > 0, got {}", self.mw_freq_ghz)));
        }
        if !(self.temperature_k > 0.0) {
            return Err(Error::param("temperature", format!("must be > 0, got {}", self.temperature_k)));
        }
        Ok(())
    }

    pub fn carrier_mhz(&self) -> f64 {
        self.mw_freq_ghz * 1e3
    }
}

/// Resonance field B0 = hν / (gβ), mT.
pub fn field_for_resonance(mw_freq_ghz: f64, g: f64) -> Result<f64> {
    if !(mw_freq_ghz > 0.0) {
        return Err(Error::param("mw_freq", "must be positive"));
    }
    if !(g > 0.0) {
        return Err(Error::param("g", "must be positive"));
    }
    Ok(mw_freq_ghz * 1e3 / electron_zeeman_factor(g))
}
