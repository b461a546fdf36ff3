// SPDX-License-Identifier: Apache-2.0

//! Rotating frames built in the eigenbasis of the static Hamiltonian.
//!
//! A frame assigns every eigenstate k a frequency f_k. The rotating-frame
//! Hamiltonian is diag(E_k − f_k), which is exactly static because it
//! commutes with the frame generator. A drive 2·Ω·cos(2πc·t + φ)·X keeps
//! only the element X_kl whose frame difference f_k − f_l equals ±c (RWA):
//!
//! * MW frames use f_k = c·M_S(k), with M_S the electron label of state k.
//! * RF frames use f_k = c_m·M_I(k) inside each electron manifold m that a
//!   carrier c_m targets, and f_k = E_k (frozen) elsewhere.

use nalgebra::DMatrix;

use crate::constants::BOLTZMANN_OVER_H;
use crate::error::{Error, Result};
use crate::spectral::{transitions, EigenSystem, SelectionRule};
use crate::spin::{Axis, FactorKind, SpinOperator};
use crate::C64;

/// Frame differences closer than this (MHz) to a carrier count as resonant.
const MATCH_TOL: f64 = 1e-6;

/// Drive channel of a pulse segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Microwave drive of the electron spin.
    Mw,
    /// Radio-frequency drive of the nuclear spin.
    Rf,
    /// Free evolution.
    Free,
}

#[derive(Debug, Clone)]
pub struct RotatingFrame {
    pub eig: EigenSystem,
    /// Channel whose carriers define the frame (Mw or Rf).
    pub channel: Channel,
    pub carriers: Vec<f64>,
    /// Frame frequency of each eigenstate, MHz.
    pub frame: Vec<f64>,
    /// Frame generator weight of each eigenstate (M_S, or M_I in driven manifolds).
    pub generator: Vec<f64>,
    /// Diagonal of the rotating-frame Hamiltonian, E_k − f_k.
    pub offsets: Vec<f64>,
    /// Equilibrium populations in the eigenbasis.
    pub equilibrium: Vec<f64>,
    drive_x: DMatrix<C64>,
    drive_y: DMatrix<C64>,
}

fn populations(energies: &[f64], temperature_k: f64) -> Vec<f64> {
    let kt = BOLTZMANN_OVER_H * temperature_k;
    let e0 = energies[0];
    let w: Vec<f64> = energies.iter().map(|e| (-(e - e0) / kt).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

impl RotatingFrame {
    /// Electron frame rotating at `carrier_mhz`.
    pub fn electron(eig: EigenSystem, carrier_mhz: f64) -> Result<Self> {
        if !(carrier_mhz > 0.0 && carrier_mhz.is_finite()) {
            return Err(Error::param("carrier", format!("must be positive, got {carrier_mhz}")));
        }
        let generator: Vec<f64> = (0..eig.dim()).map(|k| eig.electron_m(k)).collect();
        let frame: Vec<f64> = generator.iter().map(|m| carrier_mhz * m).collect();
        Self::assemble(eig, Channel::Mw, vec![carrier_mhz], frame, generator)
    }

    /// Nuclear frame with one carrier per targeted electron manifold. Each
    /// carrier is assigned to the manifold of the NMR line nearest to it.
    pub fn nuclear(eig: EigenSystem, carriers: &[f64]) -> Result<Self> {
        if carriers.is_empty() {
            return Err(Error::param("carriers", "at least one RF carrier is required"));
        }
        let lines = transitions(&eig, SelectionRule::Nmr)?;
        let mut manifold_carrier: Vec<(f64, f64)> = Vec::new();
        for &c in carriers {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::param("carrier", format!("must be positive, got {c}")));
            }
            let line = lines
                .iter()
                .min_by(|a, b| (a.frequency_mhz - c).abs().total_cmp(&(b.frequency_mhz - c).abs()))
                .ok_or(Error::NoMatchingTransition(c))?;
            let ms: f64 = eig.basis.electron_positions().iter().map(|&p| line.lower_label[p]).sum();
            if manifold_carrier.iter().any(|&(m, _)| m == ms) {
                return Err(Error::param("carriers", format!("two carriers target the M_S = {ms} manifold")));
            }
            manifold_carrier.push((ms, c));
        }
        let n = eig.dim();
        let mut frame = Vec::with_capacity(n);
        let mut generator = Vec::with_capacity(n);
        for k in 0..n {
            let ms = eig.electron_m(k);
            match manifold_carrier.iter().find(|(m, _)| *m == ms) {
                Some(&(_, c)) => {
                    let mi = eig.nuclear_m(k);
                    frame.push(c * mi);
                    generator.push(mi);
                }
                None => {
                    frame.push(eig.energies[k]);
                    generator.push(0.0);
                }
            }
        }
        Self::assemble(eig, Channel::Rf, carriers.to_vec(), frame, generator)
    }

    fn assemble(
        eig: EigenSystem,
        channel: Channel,
        carriers: Vec<f64>,
        frame: Vec<f64>,
        generator: Vec<f64>,
    ) -> Result<Self> {
        let kind = if channel == Channel::Mw { FactorKind::Electron } else { FactorKind::Nucleus };
        let x = eig.to_eigenbasis(&eig.basis.total(kind, Axis::X).matrix);
        let offsets = eig.energies.iter().zip(&frame).map(|(e, f)| e - f).collect();
        let equilibrium = populations(&eig.energies, 300.0);
        let mut f = RotatingFrame {
            eig,
            channel,
            carriers,
            frame,
            generator,
            offsets,
            equilibrium,
            drive_x: DMatrix::zeros(0, 0),
            drive_y: DMatrix::zeros(0, 0),
        };
        let (dx, dy) = f.transverse(&x);
        f.drive_x = dx;
        f.drive_y = dy;
        Ok(f)
    }

    /// Sets the temperature that defines the relaxation target.
    pub fn with_temperature(mut self, temperature_k: f64) -> Result<Self> {
        if !(temperature_k > 0.0) {
            return Err(Error::param("temperature", format!("must be > 0, got {temperature_k}")));
        }
        self.equilibrium = populations(&self.eig.energies, temperature_k);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    /// Sign of the resonant frame difference f_k − f_l (±1), or 0 if off-resonant.
    fn resonance(&self, k: usize, l: usize) -> i8 {
        let d = self.frame[k] - self.frame[l];
        for &c in &self.carriers {
            if (d - c).abs() < MATCH_TOL {
                return 1;
            }
            if (d + c).abs() < MATCH_TOL {
                return -1;
            }
        }
        0
    }

    /// Co-rotating parts (X', Y') of a transverse operator given by its
    /// x component in the eigenbasis.
    fn transverse(&self, x: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
        let n = self.dim();
        let mut xr = DMatrix::zeros(n, n);
        let mut yr = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                match self.resonance(k, l) {
                    1 => {
                        xr[(k, l)] = x[(k, l)];
                        yr[(k, l)] = x[(k, l)] * C64::new(0.0, -1.0);
                    }
                    -1 => {
                        xr[(k, l)] = x[(k, l)];
                        yr[(k, l)] = x[(k, l)] * C64::new(0.0, 1.0);
                    }
                    _ => {}
                }
            }
        }
        (xr, yr)
    }

    /// Secular part (f_k = f_l) of an operator given in the eigenbasis.
    fn secular(&self, op: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, l| {
            if (self.frame[k] - self.frame[l]).abs() < MATCH_TOL {
                op[(k, l)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Rotating-frame drive generator cos φ·X' + sin φ·Y' (unit amplitude), eigenbasis.
    pub fn drive(&self, phase: f64) -> DMatrix<C64> {
        self.drive_x.map(|z| z * phase.cos()) + self.drive_y.map(|z| z * phase.sin())
    }

    /// Rotating-frame spin component of `kind`, eigenbasis. Transverse
    /// components are built from this frame's resonant pairs.
    pub fn observable(&self, kind: FactorKind, axis: Axis) -> DMatrix<C64> {
        let x = self.eig.to_eigenbasis(&self.eig.basis.total(kind, Axis::X).matrix);
        match axis {
            Axis::X => self.transverse(&x).0,
            Axis::Y => self.transverse(&x).1,
            Axis::Z => self.secular(&self.eig.to_eigenbasis(&self.eig.basis.total(kind, Axis::Z).matrix)),
        }
    }

    /// Rotating-frame Hamiltonian in the product basis.
    pub fn hamiltonian(&self) -> SpinOperator {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.offsets.iter().map(|&e| C64::new(e, 0.0)),
        ));
        let m = self.eig.from_eigenbasis(&d);
        SpinOperator { matrix: (&m + m.adjoint()).map(|z| z * 0.5), basis: self.eig.basis.clone() }
    }

    pub fn to_eigenbasis(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        self.eig.to_eigenbasis(m)
    }

    pub fn from_eigenbasis(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        self.eig.from_eigenbasis(m)
    }
}

/// Rotating-frame Hamiltonian of `h` for an electron carrier.
pub fn rotating_frame(h: &SpinOperator, carrier_mhz: f64) -> Result<SpinOperator> {
    let eig = crate::spectral::diagonalize(h)?;
    Ok(RotatingFrame::electron(eig, carrier_mhz)?.hamiltonian())
}
