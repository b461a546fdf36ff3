// SPDX-License-Identifier: Apache-2.0

//! Exchange-driven entanglement of a spin-1/2 pair.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;
use crate::spin::SpinOperator;
use crate::C64;

/// Time (ns) for H = J·S_A·S_B to take |↑↓⟩ to a maximally entangled state.
///
/// |↑↓⟩ = (|T0⟩ + |S⟩)/√2 and the triplet–singlet gap is J, so the relative
/// phase is 2π·J·t (J in MHz, t in µs). It reaches π/2 at t = 1/(4J) µs,
/// i.e. 250/J ns.
pub fn entangling_time(j_mhz: f64) -> Result<f64> {
    if !(j_mhz > 0.0 && j_mhz.is_finite()) {
        return Err(Error::param("exchange", format!("J must be positive, got {j_mhz}")));
    }
    Ok(250.0 / j_mhz)
}

/// Wootters concurrence 2·|αδ − βγ| of a normalized two-qubit pure state
/// (basis order ↑↑, ↑↓, ↓↑, ↓↓).
pub fn concurrence(psi: &DVector<C64>) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: psi.len() });
    }
    Ok(2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm())
}

/// exp(−2πi·H·t)|ψ⟩ with H in MHz and t in ns.
pub fn evolve_pure(h: &SpinOperator, psi: &DVector<C64>, t_ns: f64) -> Result<DVector<C64>> {
    if psi.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi.len() });
    }
    Ok(HermitianEigen::new(&h.matrix).propagator(t_ns * 1e-3) * psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_proportional() {
        let t1 = entangling_time(10.0).unwrap();
        let t2 = entangling_time(20.0).unwrap();
        assert!((t1 / t2 - 2.0).abs() < 1e-15);
        assert!((entangling_time(52.0).unwrap() - 4.8).abs() < 0.01);
        assert!(entangling_time(0.0).is_err());
    }

    #[test]
    fn concurrence_limits() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert_eq!(concurrence(&DVector::from_vec(vec![z, one, z, z])).unwrap(), 0.0);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!((concurrence(&DVector::from_vec(vec![z, h, h, z])).unwrap() - 1.0).abs() < 1e-15);
    }
}
