// SPDX-License-Identifier: Apache-2.0

//! Naive and BB1 composite single-qubit rotations under systematic
//! amplitude and detuning errors.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use nalgebra::Matrix2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::trace::format_significant;
use crate::C64;

/// Nutation rate (MHz) used to turn nominal angles into pulse durations.
pub const DEFAULT_REFERENCE_NUTATION_MHZ: f64 = 31.25;

pub type Unitary2 = Matrix2<C64>;

/// Rotation by `angle` about the axis at azimuth `phase` in the x–y plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    pub angle: f64,
    pub phase: f64,
}

impl RotationSpec {
    pub fn new(angle: f64, phase: f64) -> Result<Self> {
        if !(angle > 0.0 && angle <= 2.0 * TAU) {
            return Err(Error::param("angle", format!("must lie in (0, 4π], got {angle}")));
        }
        if !phase.is_finite() {
            return Err(Error::param("phase", "must be finite"));
        }
        Ok(RotationSpec { angle, phase })
    }

    /// Error-free unitary exp(−iθ(cos φ·σx + sin φ·σy)/2).
    pub fn ideal(&self) -> Unitary2 {
        rotation(self.angle, self.phase, 0.0)
    }
}

/// Systematic control errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    /// Fractional amplitude error ε: applied angle = (1+ε)·nominal.
    pub amplitude_error: f64,
    /// Off-resonance of the drive, MHz.
    pub detuning_mhz: f64,
    /// Nominal nutation rate, MHz; sets pulse durations for the detuning term.
    pub reference_nutation_mhz: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        ErrorModel { amplitude_error: 0.0, detuning_mhz: 0.0, reference_nutation_mhz: DEFAULT_REFERENCE_NUTATION_MHZ }
    }
}

impl ErrorModel {
    pub fn amplitude(eps: f64) -> Self {
        ErrorModel { amplitude_error: eps, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude_error > -1.0 && self.amplitude_error.is_finite()) {
            return Err(Error::param("amplitude_error", format!("must exceed -1, got {}", self.amplitude_error)));
        }
        if !self.detuning_mhz.is_finite() {
            return Err(Error::param("detuning", "must be finite"));
        }
        if !(self.reference_nutation_mhz > 0.0 && self.reference_nutation_mhz.is_finite()) {
            return Err(Error::param("reference_nutation", "must be positive"));
        }
        Ok(())
    }
}

/// exp(−i·(θ/2)·n·σ) with n = (cos φ, sin φ, δ) unnormalized; δ is the
/// detuning expressed as angle per unit nominal angle.
fn rotation(angle: f64, phase: f64, z: f64) -> Unitary2 {
    let (nx, ny, nz) = (phase.cos(), phase.sin(), z);
    let len = (nx * nx + ny * ny + nz * nz).sqrt();
    let half = 0.5 * angle * len;
    let (c, s) = (half.cos(), half.sin());
    let (ux, uy, uz) = (nx / len, ny / len, nz / len);
    let i = C64::new(0.0, 1.0);
    Matrix2::new(
        C64::new(c, 0.0) - i * s * uz,
        -i * s * C64::new(ux, -uy),
        -i * s * C64::new(ux, uy),
        C64::new(c, 0.0) + i * s * uz,
    )
}

/// Ordered list of rotations; the first element acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSequence {
    pub rotations: Vec<RotationSpec>,
}

impl CompositeSequence {
    pub fn new(rotations: Vec<RotationSpec>) -> Result<Self> {
        if rotations.is_empty() {
            return Err(Error::param("sequence", "must contain at least one rotation"));
        }
        Ok(CompositeSequence { rotations })
    }

    /// Sum of nominal rotation angles.
    pub fn total_angle(&self) -> f64 {
        self.rotations.iter().map(|r| r.angle).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Naive,
    Bb1,
}

/// The target rotation as a single pulse.
pub fn naive(target: RotationSpec) -> CompositeSequence {
    CompositeSequence { rotations: vec![target] }
}

/// BB1: π_φ, 2π_3φ, π_φ, then θ_0, with φ = arccos(−θ/4π), all phases
/// offset by the target phase.
pub fn bb1_sequence(target: RotationSpec) -> Result<CompositeSequence> {
    let ratio = -target.angle / (2.0 * TAU);
    if ratio.abs() > 1.0 {
        return Err(Error::param("angle", format!("BB1 requires |θ/4π| <= 1, got {}", -ratio)));
    }
    let phi = ratio.acos();
    let p = target.phase;
    CompositeSequence::new(vec![
        RotationSpec { angle: PI, phase: p + phi },
        RotationSpec { angle: TAU, phase: p + 3.0 * phi },
        RotationSpec { angle: PI, phase: p + phi },
        target,
    ])
}

pub fn sequence_for(scheme: Scheme, target: RotationSpec) -> Result<CompositeSequence> {
    match scheme {
        Scheme::Naive => Ok(naive(target)),
        Scheme::Bb1 => bb1_sequence(target),
    }
}

/// Unitary implemented by `seq` under `err`.
pub fn realize(seq: &CompositeSequence, err: &ErrorModel) -> Result<Unitary2> {
    err.validate()?;
    let scale = 1.0 + err.amplitude_error;
    // detuning relative to the actual nutation rate
    let z = err.detuning_mhz / (scale * err.reference_nutation_mhz);
    Ok(seq.rotations.iter().fold(Unitary2::identity(), |u, r| rotation(scale * r.angle, r.phase, z) * u))
}

/// Average gate fidelity (|Tr(U†V)|² + d)/(d(d+1)) of square unitaries.
pub fn gate_fidelity(u: &nalgebra::DMatrix<C64>, v: &nalgebra::DMatrix<C64>) -> Result<f64> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch { expected: u.nrows(), found: v.nrows() });
    }
    let d = u.nrows() as f64;
    let tr = (u.adjoint() * v).trace();
    Ok((tr.norm_sqr() + d) / (d * (d + 1.0)))
}

/// [`gate_fidelity`] for 2×2 unitaries.
pub fn gate_fidelity2(u: &Unitary2, v: &Unitary2) -> f64 {
    let tr = (u.adjoint() * v).trace();
    (tr.norm_sqr() + 2.0) / 6.0
}

/// Fidelity on a grid of amplitude errors (columns) and detunings (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySurface {
    pub epsilons: Vec<f64>,
    pub detunings_mhz: Vec<f64>,
    /// `values[i][j]` at detuning i, amplitude error j.
    pub values: Vec<Vec<f64>>,
}

impl FidelitySurface {
    pub fn at(&self, detuning_index: usize, epsilon_index: usize) -> f64 {
        self.values[detuning_index][epsilon_index]
    }

    /// Header row `delta_MHz\epsilon,ε…`, then one row per detuning; 10 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta_MHz\\epsilon");
        for e in &self.epsilons {
            let _ = write!(out, ",{}", format_significant(*e, 10));
        }
        out.push('\n');
        for (d, row) in self.detunings_mhz.iter().zip(&self.values) {
            out.push_str(&format_significant(*d, 10));
            for v in row {
                let _ = write!(out, ",{}", format_significant(*v, 10));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidTrace(format!("fidelity surface: {m}"));
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(&e.to_string()));
        let epsilons = header.split(',').skip(1).map(parse).collect::<Result<Vec<_>>>()?;
        let mut detunings_mhz = Vec::new();
        let mut values = Vec::new();
        for line in lines {
            let mut cells = line.split(',');
            detunings_mhz.push(parse(cells.next().ok_or_else(|| bad("empty row"))?)?);
            let row = cells.map(parse).collect::<Result<Vec<_>>>()?;
            if row.len() != epsilons.len() {
                return Err(bad("ragged row"));
            }
            values.push(row);
        }
        Ok(FidelitySurface { epsilons, detunings_mhz, values })
    }
}

/// Fidelity of `scheme` against the ideal target over the error grids.
pub fn fidelity_sweep(
    target: RotationSpec,
    scheme: Scheme,
    epsilons: &[f64],
    detunings_mhz: &[f64],
    reference_nutation_mhz: f64,
) -> Result<FidelitySurface> {
    if epsilons.is_empty() || detunings_mhz.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let seq = sequence_for(scheme, target)?;
    let ideal = target.ideal();
    let cells: Vec<(f64, f64)> = detunings_mhz.iter().flat_map(|&d| epsilons.iter().map(move |&e| (d, e))).collect();
    let flat: Vec<f64> = cells
        .par_iter()
        .map(|&(d, e)| {
            let err = ErrorModel { amplitude_error: e, detuning_mhz: d, reference_nutation_mhz };
            realize(&seq, &err).map(|u| gate_fidelity2(&ideal, &u))
        })
        .collect::<Result<_>>()?;
    let values = flat.chunks(epsilons.len()).map(|c| c.to_vec()).collect();
    Ok(FidelitySurface { epsilons: epsilons.to_vec(), detunings_mhz: detunings_mhz.to_vec(), values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi_x() -> RotationSpec {
        RotationSpec::new(PI, 0.0).unwrap()
    }

    #[test]
    fn bb1_phase_for_pi() {
        let s = bb1_sequence(pi_x()).unwrap();
        assert!((s.rotations[0].phase - 1.823_476_581_936_975).abs() < 1e-12);
        assert!((s.total_angle() - 5.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn error_free_sequences_are_exact() {
        for scheme in [Scheme::Naive, Scheme::Bb1] {
            for (angle, phase) in [(PI, 0.0), (PI / 2.0, 0.3), (1.7, -2.0)] {
                let t = RotationSpec::new(angle, phase).unwrap();
                let u = realize(&sequence_for(scheme, t).unwrap(), &ErrorModel::default()).unwrap();
                assert!(1.0 - gate_fidelity2(&t.ideal(), &u) < 1e-12);
            }
        }
    }

    #[test]
    fn naive_pi_with_ten_percent_error() {
        let u = realize(&naive(pi_x()), &ErrorModel::amplitude(0.1)).unwrap();
        let expect = rotation(1.1 * PI, 0.0, 0.0);
        assert!((u - expect).norm() < 1e-14);
        let f = gate_fidelity2(&pi_x().ideal(), &u);
        let oracle = (4.0 * (0.05 * PI).cos().powi(2) + 2.0) / 6.0;
        assert!((f - oracle).abs() < 1e-14);
        assert!((f - 0.9836).abs() < 1e-4);
    }

    #[test]
    fn bb1_corrects_amplitude_error() {
        let u = realize(&bb1_sequence(pi_x()).unwrap(), &ErrorModel::amplitude(0.1)).unwrap();
        assert!(gate_fidelity2(&pi_x().ideal(), &u) >= 0.9999);
    }

    #[test]
    fn traceless_mismatch_gives_one_third() {
        let id = nalgebra::DMatrix::<C64>::identity(2, 2);
        let x = pi_x().ideal();
        let xd = nalgebra::DMatrix::from_fn(2, 2, |i, j| x[(i, j)]);
        assert!((gate_fidelity(&id, &xd).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(gate_fidelity(&id, &nalgebra::DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn surface_csv_round_trip() {
        let s = fidelity_sweep(pi_x(), Scheme::Bb1, &[0.0, 0.1], &[0.0, 0.5], 31.25).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("delta_MHz\\epsilon,0,0.1\n"));
        let back = FidelitySurface::from_csv(&csv).unwrap();
        assert_eq!(back.epsilons, s.epsilons);
        for (a, b) in back.values.iter().flatten().zip(s.values.iter().flatten()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(fidelity_sweep(pi_x(), Scheme::Naive, &[], &[0.0], 31.25).is_err());
    }

    #[test]
    fn angle_validation() {
        assert!(RotationSpec::new(0.0, 0.0).is_err());
        assert!(RotationSpec::new(4.0 * PI, 0.0).is_ok());
        assert!(RotationSpec::new(4.1 * PI, 0.0).is_err());
        assert!(ErrorModel::amplitude(-1.0).validate().is_err());
    }
}
