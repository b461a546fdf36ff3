// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::dynamics::{Channel, DensityMatrix, RelaxationParams, RotatingFrame};
use crate::error::{Error, Result};
use crate::linalg::{conjugate, trace_product_re, HermitianEigen};
use crate::spin::{Axis, FactorKind};
use crate::C64;

/// One piecewise-constant interval of a pulse sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub channel: Channel,
    /// On-resonance nutation frequency ω₁/2π, MHz.
    pub nutation_mhz: f64,
    /// Drive phase, radians (0 = x).
    pub phase: f64,
    pub duration_ns: f64,
    /// Drive frequency relative to the frame carrier, MHz.
    pub carrier_offset_mhz: f64,
}

impl PulseSegment {
    pub fn pulse(channel: Channel, nutation_mhz: f64, phase: f64, duration_ns: f64) -> Self {
        PulseSegment { channel, nutation_mhz, phase, duration_ns, carrier_offset_mhz: 0.0 }
    }

    pub fn free(duration_ns: f64) -> Self {
        PulseSegment { channel: Channel::Free, nutation_mhz: 0.0, phase: 0.0, duration_ns, carrier_offset_mhz: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_ns >= 0.0 && self.duration_ns.is_finite()) {
            return Err(Error::param("duration", format!("must be finite and >= 0, got {}", self.duration_ns)));
        }
        if !(self.nutation_mhz >= 0.0 && self.nutation_mhz.is_finite()) {
            return Err(Error::param("nutation", format!("must be finite and >= 0, got {}", self.nutation_mhz)));
        }
        if self.channel == Channel::Free && self.nutation_mhz != 0.0 {
            return Err(Error::param("nutation", "free segments carry no drive"));
        }
        if !self.phase.is_finite() || !self.carrier_offset_mhz.is_finite() {
            return Err(Error::param("phase", "phase and carrier offset must be finite"));
        }
        Ok(())
    }
}

/// Spin component measured in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Electron(Axis),
    Nuclear(Axis),
}

impl Observable {
    pub fn operator(&self, frame: &RotatingFrame) -> DMatrix<C64> {
        match *self {
            Observable::Electron(a) => frame.observable(FactorKind::Electron, a),
            Observable::Nuclear(a) => frame.observable(FactorKind::Nucleus, a),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub segments: Vec<PulseSegment>,
    pub detection: Vec<Observable>,
}

impl PulseSequence {
    pub fn new(segments: Vec<PulseSegment>, detection: Vec<Observable>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(PulseSequence { segments, detection })
    }

    pub fn total_duration_ns(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_ns).sum()
    }
}

/// Final state and the detected observables after every segment.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub state: DensityMatrix,
    /// `samples[i][j]` is observable j after segment i.
    pub samples: Vec<Vec<f64>>,
}

/// Diagonalized generator of one constant segment, eigenbasis of the frame.
#[derive(Debug, Clone)]
pub struct SegmentGenerator {
    eig: HermitianEigen,
    /// Δc·g_k terms removed from the frame and restored as a phase.
    offset_phase: Option<Vec<f64>>,
}

impl SegmentGenerator {
    pub fn new(
        frame: &RotatingFrame,
        channel: Channel,
        nutation_mhz: f64,
        phase: f64,
        carrier_offset_mhz: f64,
    ) -> Result<Self> {
        let n = frame.dim();
        let mut h = DMatrix::<C64>::zeros(n, n);
        let shift = if channel == Channel::Free { 0.0 } else { carrier_offset_mhz };
        for k in 0..n {
            h[(k, k)] = C64::new(frame.offsets[k] - shift * frame.generator[k], 0.0);
        }
        if nutation_mhz != 0.0 {
            if channel != frame.channel {
                return Err(Error::param("channel", format!("{channel:?} drive in a {:?} frame", frame.channel)));
            }
            h += frame.drive(phase).map(|z| z * nutation_mhz);
        }
        let offset_phase = (shift != 0.0).then(|| frame.generator.iter().map(|g| shift * g).collect());
        Ok(SegmentGenerator { eig: HermitianEigen::new(&h), offset_phase })
    }

    /// Propagator over `duration_ns`, eigenbasis of the frame.
    pub fn unitary(&self, duration_ns: f64) -> DMatrix<C64> {
        let t_us = duration_ns * 1e-3;
        let mut u = self.eig.propagator(t_us);
        if let Some(p) = &self.offset_phase {
            for (k, w) in p.iter().enumerate() {
                let z = C64::from_polar(1.0, -TAU * w * t_us);
                u.row_mut(k).iter_mut().for_each(|x| *x *= z);
            }
        }
        u
    }

    /// Eigenvalues and eigenvectors of the generator.
    pub fn spectrum(&self) -> (&[f64], &DMatrix<C64>) {
        (&self.eig.values, &self.eig.vectors)
    }
}

/// Secular damping in the frame eigenbasis: coherences decay with T2,
/// populations recover toward equilibrium with T1.
pub fn relax(rho: &mut DMatrix<C64>, equilibrium: &[f64], relax: &RelaxationParams, duration_ns: f64) {
    let t_ms = duration_ns * 1e-6;
    if let Some(t2) = relax.t2_ms {
        let d = (-t_ms / t2).exp();
        let n = rho.nrows();
        for k in 0..n {
            for l in 0..n {
                if k != l {
                    rho[(k, l)] *= d;
                }
            }
        }
    }
    if let Some(t1) = relax.t1_ms {
        let d = (-t_ms / t1).exp();
        for (k, &p) in equilibrium.iter().enumerate() {
            let cur = rho[(k, k)].re;
            rho[(k, k)] = C64::new(p + (cur - p) * d, 0.0);
        }
    }
}

fn key(s: &PulseSegment) -> (Channel, u64, u64, u64) {
    (s.channel, s.nutation_mhz.to_bits(), s.phase.to_bits(), s.carrier_offset_mhz.to_bits())
}

/// Propagates `rho` (product basis) through `seq` in `frame`.
pub fn propagate(
    rho: &DensityMatrix,
    frame: &RotatingFrame,
    seq: &PulseSequence,
    relaxation: &RelaxationParams,
) -> Result<Propagation> {
    relaxation.validate()?;
    if rho.dim() != frame.dim() {
        return Err(Error::DimensionMismatch { expected: frame.dim(), found: rho.dim() });
    }
    let observables: Vec<DMatrix<C64>> = seq.detection.iter().map(|o| o.operator(frame)).collect();
    let mut state = frame.to_eigenbasis(&rho.matrix);
    let mut cache: HashMap<(Channel, u64, u64, u64), SegmentGenerator> = HashMap::new();
    let mut samples = Vec::with_capacity(seq.segments.len());
    for seg in &seq.segments {
        seg.validate()?;
        if seg.duration_ns > 0.0 {
            let gen = match cache.entry(key(seg)) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => v.insert(SegmentGenerator::new(
                    frame,
                    seg.channel,
                    seg.nutation_mhz,
                    seg.phase,
                    seg.carrier_offset_mhz,
                )?),
            };
            state = conjugate(&gen.unitary(seg.duration_ns), &state);
            if !relaxation.is_off() {
                relax(&mut state, &frame.equilibrium, relaxation, seg.duration_ns);
            }
        }
        samples.push(observables.iter().map(|o| trace_product_re(&state, o)).collect());
    }
    let m = frame.from_eigenbasis(&state);
    let m = (&m + m.adjoint()).map(|z| z * 0.5);
    Ok(Propagation { state: DensityMatrix { matrix: m, basis: rho.basis.clone() }, samples })
}
