// SPDX-License-Identifier: Apache-2.0

//! Angular-momentum matrices and product-space composition.
//!
//! Basis convention: the electron factor(s) come first, followed by nuclei in
//! declaration order; within each factor states are ordered by descending
//! magnetic quantum number (m = s, s-1, ..., -s).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::constants::MAX_DIMENSION;
use crate::error::{Error, Result};
use crate::C64;

/// Non-negative half-integer spin, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinQuantumNumber(u8);

impl SpinQuantumNumber {
    pub const ZERO: Self = SpinQuantumNumber(0);
    pub const HALF: Self = SpinQuantumNumber(1);
    pub const ONE: Self = SpinQuantumNumber(2);
    pub const THREE_HALVES: Self = SpinQuantumNumber(3);

    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !value.is_finite() || value < 0.0 || (twice - twice.round()).abs() > 1e-9 || twice.round() > 7.0 {
            return Err(Error::InvalidSpin(value));
        }
        Ok(SpinQuantumNumber(twice.round() as u8))
    }

    pub fn from_twice(twice: u8) -> Result<Self> {
        if twice > 7 {
            return Err(Error::InvalidSpin(twice as f64 / 2.0));
        }
        Ok(SpinQuantumNumber(twice))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn twice(self) -> u8 {
        self.0
    }

    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }

    /// Magnetic quantum numbers in basis order (descending).
    pub fn projections(self) -> impl Iterator<Item = f64> {
        let s = self.value();
        (0..self.multiplicity()).map(move |k| s - k as f64)
    }
}

impl fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Role of one tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Electron,
    Nucleus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub spin: SpinQuantumNumber,
    pub kind: FactorKind,
}

/// Ordered list of tensor factors spanning a product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    factors: Vec<Factor>,
}

impl Basis {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let basis = Basis { factors };
        let dim = basis.dimension();
        if dim > MAX_DIMENSION {
            return Err(Error::DimensionOverflow(dim));
        }
        Ok(basis)
    }

    /// Single factor of the given kind.
    pub fn single(spin: SpinQuantumNumber, kind: FactorKind) -> Self {
        Basis { factors: vec![Factor { spin, kind }] }
    }

    /// Electron spin followed by nuclear spins.
    pub fn electron_nuclear(electron: SpinQuantumNumber, nuclei: &[SpinQuantumNumber]) -> Result<Self> {
        let mut factors = vec![Factor { spin: electron, kind: FactorKind::Electron }];
        factors.extend(nuclei.iter().map(|&spin| Factor { spin, kind: FactorKind::Nucleus }));
        Basis::new(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.spin.multiplicity()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.spin.multiplicity()).product()
    }

    /// Concatenates two bases (tensor product `self ⊗ other`).
    pub fn tensor(&self, other: &Basis) -> Result<Basis> {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Basis::new(factors)
    }

    /// Magnetic quantum numbers (one per factor) of product state `index`.
    pub fn label(&self, index: usize) -> Vec<f64> {
        let dims = self.dims();
        let mut rem = index;
        let mut out = vec![0.0; dims.len()];
        for (k, &d) in dims.iter().enumerate().rev() {
            let local = rem % d;
            rem /= d;
            out[k] = self.factors[k].spin.value() - local as f64;
        }
        out
    }

    pub fn labels(&self) -> Vec<Vec<f64>> {
        (0..self.dimension()).map(|i| self.label(i)).collect()
    }

    pub fn electron_positions(&self) -> Vec<usize> {
        self.positions(FactorKind::Electron)
    }

    pub fn nucleus_positions(&self) -> Vec<usize> {
        self.positions(FactorKind::Nucleus)
    }

    fn positions(&self, kind: FactorKind) -> Vec<usize> {
        self.factors.iter().enumerate().filter(|(_, f)| f.kind == kind).map(|(i, _)| i).collect()
    }

    /// Sum of the Cartesian component `axis` over every factor of `kind`.
    pub fn total(&self, kind: FactorKind, axis: Axis) -> SpinOperator {
        let mut acc = SpinOperator::zeros(self.clone());
        for pos in self.positions(kind) {
            let m = spin_matrices(self.factors[pos].spin);
            let local = match axis {
                Axis::X => m.x,
                Axis::Y => m.y,
                Axis::Z => m.z,
            };
            acc = &acc + &embed_unchecked(&local.matrix, pos, self);
        }
        acc
    }

    /// Cartesian component on the factor at `position`.
    pub fn component(&self, position: usize, axis: Axis) -> SpinOperator {
        let m = spin_matrices(self.factors[position].spin);
        let local = match axis {
            Axis::X => m.x,
            Axis::Y => m.y,
            Axis::Z => m.z,
        };
        embed_unchecked(&local.matrix, position, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Dense complex square matrix with an attached product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    pub matrix: DMatrix<C64>,
    pub basis: Basis,
}

impl SpinOperator {
    pub fn new(matrix: DMatrix<C64>, basis: Basis) -> Result<Self> {
        let dim = basis.dimension();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(SpinOperator { matrix, basis })
    }

    pub fn zeros(basis: Basis) -> Self {
        let d = basis.dimension();
        SpinOperator { matrix: DMatrix::zeros(d, d), basis }
    }

    pub fn identity(basis: Basis) -> Self {
        let d = basis.dimension();
        SpinOperator { matrix: DMatrix::identity(d, d), basis }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        SpinOperator { matrix: self.matrix.adjoint(), basis: self.basis.clone() }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        SpinOperator { matrix: self.matrix.map(|z| z * factor), basis: self.basis.clone() }
    }

    /// Relative anti-Hermitian part ‖A − A†‖ / max(‖A‖, 1e-300).
    pub fn hermiticity_error(&self) -> f64 {
        let diff = (&self.matrix - self.matrix.adjoint()).norm();
        diff / self.matrix.norm().max(1e-300)
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_error() <= rel_tol
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &SpinOperator) -> SpinOperator {
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        SpinOperator { matrix: m, basis: self.basis.clone() }
    }

    /// Kronecker product `self ⊗ other` with concatenated bases.
    pub fn kron(&self, other: &SpinOperator) -> Result<SpinOperator> {
        let basis = self.basis.tensor(&other.basis)?;
        Ok(SpinOperator { matrix: self.matrix.kronecker(&other.matrix), basis })
    }
}

impl<'a> Add<&'a SpinOperator> for &'a SpinOperator {
    type Output = SpinOperator;
    fn add(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { matrix: &self.matrix + &rhs.matrix, basis: self.basis.clone() }
    }
}

impl<'a> Sub<&'a SpinOperator> for &'a SpinOperator {
    type Output = SpinOperator;
    fn sub(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { matrix: &self.matrix - &rhs.matrix, basis: self.basis.clone() }
    }
}

impl<'a> Mul<&'a SpinOperator> for &'a SpinOperator {
    type Output = SpinOperator;
    fn mul(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator { matrix: &self.matrix * &rhs.matrix, basis: self.basis.clone() }
    }
}

impl Mul<f64> for &SpinOperator {
    type Output = SpinOperator;
    fn mul(self, rhs: f64) -> SpinOperator {
        self.scale(rhs)
    }
}

impl Neg for &SpinOperator {
    type Output = SpinOperator;
    fn neg(self) -> SpinOperator {
        self.scale(-1.0)
    }
}

/// Cartesian and ladder operators of a single spin.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub x: SpinOperator,
    pub y: SpinOperator,
    pub z: SpinOperator,
    pub plus: SpinOperator,
    pub minus: SpinOperator,
}

/// Builds Sx, Sy, Sz, S+ and S− for spin `s` in the descending-m basis.
pub fn spin_matrices(s: SpinQuantumNumber) -> SpinMatrices {
    let d = s.multiplicity();
    let sv = s.value();
    let m: Vec<f64> = s.projections().collect();
    let mut plus = DMatrix::<C64>::zeros(d, d);
    // column k holds |m_k>; S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and m+1 sits one row up
    for k in 1..d {
        let mk = m[k];
        plus[(k - 1, k)] = C64::new((sv * (sv + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let x = (&plus + &minus).map(|z| z * 0.5);
    let y = (&plus - &minus).map(|z| z / C64::new(0.0, 2.0));
    let z = DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(m[i], 0.0) } else { C64::new(0.0, 0.0) });
    let basis = Basis::single(s, FactorKind::Electron);
    let wrap = |matrix| SpinOperator { matrix, basis: basis.clone() };
    SpinMatrices { x: wrap(x), y: wrap(y), z: wrap(z), plus: wrap(plus), minus: wrap(minus) }
}

/// Embeds `op` at `position` of the product space described by `spins`:
/// 1 ⊗ … ⊗ op ⊗ … ⊗ 1.
pub fn embed(op: &SpinOperator, position: usize, spins: &[SpinQuantumNumber]) -> Result<SpinOperator> {
    let factors = spins
        .iter()
        .enumerate()
        .map(|(i, &spin)| Factor { spin, kind: if i == 0 { FactorKind::Electron } else { FactorKind::Nucleus } })
        .collect();
    embed_in(op, position, &Basis::new(factors)?)
}

/// Same as [`embed`] with an explicit target basis.
pub fn embed_in(op: &SpinOperator, position: usize, basis: &Basis) -> Result<SpinOperator> {
    let dims = basis.dims();
    let Some(&expected) = dims.get(position) else {
        return Err(Error::param("position", format!("{position} out of range for {} factors", dims.len())));
    };
    if op.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: op.dim() });
    }
    Ok(embed_unchecked(&op.matrix, position, basis))
}

fn embed_unchecked(local: &DMatrix<C64>, position: usize, basis: &Basis) -> SpinOperator {
    let dims = basis.dims();
    let left: usize = dims[..position].iter().product();
    let right: usize = dims[position + 1..].iter().product();
    let matrix =
        DMatrix::<C64>::identity(left, left).kronecker(local).kronecker(&DMatrix::<C64>::identity(right, right));
    SpinOperator { matrix, basis: basis.clone() }
}
