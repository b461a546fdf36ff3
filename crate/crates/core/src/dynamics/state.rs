// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use crate::constants::BOLTZMANN_OVER_H;
use crate::error::{Error, Result};
use crate::linalg::{trace_product_re, HermitianEigen};
use crate::spin::{Basis, SpinOperator};
use crate::C64;

/// Below this ratio ‖H‖/kT the thermal state uses the high-temperature expansion.
pub const HIGH_TEMPERATURE_RATIO: f64 = 1e-3;

const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_FLOOR: f64 = -1e-10;

/// Hermitian, unit-trace, positive semidefinite state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: DMatrix<C64>,
    pub basis: Basis,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>, basis: Basis) -> Result<Self> {
        let rho = DensityMatrix { matrix, basis };
        rho.validate()?;
        Ok(rho)
    }

    /// Maximally mixed state 1/d.
    pub fn maximally_mixed(basis: Basis) -> Self {
        let d = basis.dimension();
        let matrix = DMatrix::identity(d, d).map(|z: C64| z / d as f64);
        DensityMatrix { matrix, basis }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.basis.dimension();
        if self.matrix.nrows() != d || self.matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.matrix.nrows() });
        }
        let herm = (&self.matrix - self.matrix.adjoint()).norm();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < POSITIVITY_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        HermitianEigen::new(&self.matrix).values.first().copied().unwrap_or(0.0)
    }

    /// Tr(ρ·O) for a Hermitian observable.
    pub fn expectation(&self, op: &SpinOperator) -> f64 {
        trace_product_re(&self.matrix, &op.matrix)
    }

    pub fn purity(&self) -> f64 {
        trace_product_re(&self.matrix, &self.matrix)
    }
}

/// Boltzmann state exp(−H/kT)/Z. An infinite temperature gives 1/d.
pub fn thermal_state(h: &SpinOperator, temperature_k: f64) -> Result<DensityMatrix> {
    if !(temperature_k > 0.0) {
        return Err(Error::param("temperature", format!("must be > 0, got {temperature_k}")));
    }
    let kt = BOLTZMANN_OVER_H * temperature_k;
    let d = h.dim();
    let norm = crate::linalg::operator_norm(&h.matrix);
    let matrix = if norm / kt < HIGH_TEMPERATURE_RATIO {
        // 1 − H/kT + H²/2(kT)², renormalized
        let x = h.matrix.map(|z| z / kt);
        let id = DMatrix::<C64>::identity(d, d);
        let m = &id - &x + (&x * &x).map(|z| z * 0.5);
        let tr = m.trace().re;
        m.map(|z| z / tr)
    } else {
        let eig = HermitianEigen::new(&h.matrix);
        let e0 = eig.values[0];
        let z: f64 = eig.values.iter().map(|e| (-(e - e0) / kt).exp()).sum();
        eig.apply(|e| C64::new((-(e - e0) / kt).exp() / z, 0.0))
    };
    let m = (&matrix + matrix.adjoint()).map(|z| z * 0.5);
    Ok(DensityMatrix { matrix: m, basis: h.basis.clone() })
}

/// Phenomenological T1/T2 (ms). `None` means no relaxation of that kind.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelaxationParams {
    pub t1_ms: Option<f64>,
    pub t2_ms: Option<f64>,
}

impl RelaxationParams {
    pub fn new(t1_ms: Option<f64>, t2_ms: Option<f64>) -> Result<Self> {
        let r = RelaxationParams { t1_ms, t2_ms };
        r.validate()?;
        Ok(r)
    }

    pub fn none() -> Self {
        RelaxationParams::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("t1", self.t1_ms), ("t2", self.t2_ms)] {
            if let Some(t) = t {
                if !(t > 0.0) {
                    return Err(Error::param(name, format!("must be positive, got {t}")));
                }
            }
        }
        if let (Some(t1), Some(t2)) = (self.t1_ms, self.t2_ms) {
            if t1 < t2 / 2.0 {
                return Err(Error::Unphysical { t1, t2 });
            }
        }
        Ok(())
    }

    pub fn is_off(&self) -> bool {
        self.t1_ms.is_none() && self.t2_ms.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_static_hamiltonian;
    use crate::species::{FieldConfig, SpeciesParams};
    use crate::spin::{Axis, FactorKind};

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let h = build_static_hamiltonian(&s, &f).unwrap();
        let rho = thermal_state(&h, f64::INFINITY).unwrap();
        let mixed = DensityMatrix::maximally_mixed(h.basis.clone());
        assert!((&rho.matrix - &mixed.matrix).norm() < 1e-15);
    }

    #[test]
    fn room_temperature_polarization_matches_boltzmann_sum() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::new(344.8, 9.67).unwrap();
        let h = build_static_hamiltonian(&s, &f).unwrap();
        let rho = thermal_state(&h, 300.0).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        let sz = rho.expectation(&h.basis.total(FactorKind::Electron, Axis::Z));
        // independent Boltzmann average over first-order levels
        let kt = BOLTZMANN_OVER_H * 300.0;
        let (mut num, mut z) = (0.0, 0.0);
        for ms in [1.5, 0.5, -0.5, -1.5] {
            for mi in [1.0, 0.0, -1.0] {
                let e = s.electron_larmor(344.8) * ms + s.nuclear_larmor(344.8) * mi + s.hyperfine_mhz * ms * mi;
                let w = (-e / kt).exp();
                num += ms * w;
                z += w;
            }
        }
        let oracle = num / z;
        assert!(sz < 0.0);
        assert!((sz - oracle).abs() < 1e-6 * oracle.abs(), "{sz} {oracle}");
        // high-temperature estimate −(5/4)·hν/kT
        let approx = -1.25 * s.electron_larmor(344.8) / kt;
        assert!((sz / approx - 1.0).abs() < 0.01);
    }

    #[test]
    fn high_temperature_branch_matches_series() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::new(344.8, 9.67).unwrap();
        let h = build_static_hamiltonian(&s, &f).unwrap();
        let norm = crate::linalg::operator_norm(&h.matrix);
        let t = 2.0 * norm / (BOLTZMANN_OVER_H * HIGH_TEMPERATURE_RATIO);
        // exp(−H/kT) by direct power series
        let x = h.matrix.map(|z| -z / (BOLTZMANN_OVER_H * t));
        let d = x.nrows();
        let mut term = DMatrix::<C64>::identity(d, d);
        let mut sum = term.clone();
        for k in 1..12 {
            term = (&term * &x).map(|v| v / k as f64);
            sum += &term;
        }
        let z = sum.trace();
        let oracle = sum.map(|v| v / z);
        let rho = thermal_state(&h, t).unwrap();
        assert!((&rho.matrix - &oracle).norm() < 1e-9, "{}", (&rho.matrix - &oracle).norm());
    }

    #[test]
    fn relaxation_physicality() {
        assert!(RelaxationParams::new(Some(1.0), Some(2.0)).is_ok());
        assert_eq!(RelaxationParams::new(Some(1.0), Some(3.0)), Err(Error::Unphysical { t1: 1.0, t2: 3.0 }));
        assert!(RelaxationParams::new(None, Some(-1.0)).is_err());
    }

    #[test]
    fn invalid_states_rejected() {
        let b = Basis::single(crate::spin::SpinQuantumNumber::HALF, FactorKind::Electron);
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.2, 0.0), C64::new(-0.2, 0.0)]));
        assert!(matches!(DensityMatrix::new(m, b.clone()), Err(Error::InvalidState(_))));
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.6, 0.0)]));
        assert!(DensityMatrix::new(m, b).is_err());
    }
}
