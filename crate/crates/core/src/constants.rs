// SPDX-License-Identifier: Apache-2.0

//! Physical constants (CODATA 2018) in the unit system used by the engines:
//! frequencies in MHz, fields in mT, times in ns, temperatures in K.

/// Bohr magneton over Planck's constant, MHz/mT (13.99624493 GHz/T).
pub const BOHR_MAGNETON_OVER_H: f64 = 13.996_244_93;

/// Nuclear magneton over Planck's constant, MHz/mT (7.622593229 MHz/T).
pub const NUCLEAR_MAGNETON_OVER_H: f64 = 7.622_593_229e-3;

/// Boltzmann constant over Planck's constant, MHz/K (20.83661912 GHz/K).
pub const BOLTZMANN_OVER_H: f64 = 2.083_661_912e4;

/// Bohr magneton, J/T.
pub const BOHR_MAGNETON_SI: f64 = 9.274_010_078_3e-24;

/// Planck constant, J s (exact).
pub const PLANCK_SI: f64 = 6.626_070_15e-34;

/// Vacuum permeability over 4π, T² m³/J.
pub const MU0_OVER_4PI_SI: f64 = 1.000_000_000_55e-7;

/// Nuclear g-factor of ¹⁴N.
pub const G_N14: f64 = 0.403_761_00;

/// Nuclear g-factor of ¹⁵N.
pub const G_N15: f64 = -0.566_377_68;

/// Nuclear g-factor of ¹³C.
pub const G_C13: f64 = 1.404_823_6;

/// Natural abundance of ¹³C.
pub const C13_ABUNDANCE: f64 = 0.0107;

/// Default ¹³C–electron isotropic coupling on the C60 cage, MHz.
pub const C13_COUPLING_MHZ: f64 = 0.036;

/// Electron g-factor of N@C60.
pub const G_NC60: f64 = 2.0036;

/// Largest Hilbert-space dimension any engine will build.
pub const MAX_DIMENSION: usize = 4096;

/// Electron Zeeman factor g·(β/h), MHz/mT.
pub fn electron_zeeman_factor(g: f64) -> f64 {
    g * BOHR_MAGNETON_OVER_H
}

/// Point-dipole coupling constant `c_dd` in MHz·nm³ for two electron spins
/// with g-factors `g_a` and `g_b`: D(r) = c_dd / r³.
pub fn dipolar_constant(g_a: f64, g_b: f64) -> f64 {
    // (μ0/4π) g_a g_b β² / h in Hz·m³, then 1 m³ = 1e27 nm³ and 1 Hz = 1e-6 MHz.
    MU0_OVER_4PI_SI * g_a * g_b * BOHR_MAGNETON_SI * BOHR_MAGNETON_SI / PLANCK_SI * 1e27 * 1e-6
}

/// Converts a field-unit splitting (mT) into MHz with the electron factor.
pub fn mt_to_mhz(field_mt: f64, g: f64) -> f64 {
    field_mt * electron_zeeman_factor(g)
}

/// Converts a frequency (MHz) into the equivalent electron field (mT).
pub fn mhz_to_mt(freq_mhz: f64, g: f64) -> f64 {
    freq_mhz / electron_zeeman_factor(g)
}

/// Converts a hyperfine constant quoted in gauss into MHz (1 G = 0.1 mT).
pub fn gauss_to_mhz(gauss: f64, g: f64) -> f64 {
    mt_to_mhz(gauss * 0.1, g)
}
