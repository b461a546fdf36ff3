// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;
use crate::spin::{Axis, Basis, FactorKind, SpinOperator};
use crate::C64;

/// Hermiticity tolerance (relative Frobenius norm) accepted by [`diagonalize`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues are treated as degenerate when closer than this fraction of ‖H‖.
const DEGENERACY_TOL: f64 = 1e-9;

/// Weight ratio between successive factors in the tie-break operator.
const TIE_BREAK_RATIO: f64 = 1.0 / 64.0;

/// Full spectrum of a Hamiltonian with deterministic ordering and labels.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending energies, MHz.
    pub energies: Vec<f64>,
    /// Unitary matrix of column eigenvectors.
    pub states: DMatrix<C64>,
    pub basis: Basis,
    /// Magnetic quantum numbers (one per factor) of each state's dominant
    /// product-basis component.
    pub labels: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Sum of electron projections in the label of state `k`.
    pub fn electron_m(&self, k: usize) -> f64 {
        self.basis.electron_positions().iter().map(|&p| self.labels[k][p]).sum()
    }

    /// Sum of nuclear projections in the label of state `k`.
    pub fn nuclear_m(&self, k: usize) -> f64 {
        self.basis.nucleus_positions().iter().map(|&p| self.labels[k][p]).sum()
    }

    /// Projection of the first nucleus (the nitrogen for single molecules).
    pub fn primary_nuclear_m(&self, k: usize) -> f64 {
        self.basis.nucleus_positions().first().map_or(0.0, |&p| self.labels[k][p])
    }

    /// ⟨k|O|l⟩ for an operator given in the product basis.
    pub fn element(&self, op: &DMatrix<C64>, k: usize, l: usize) -> C64 {
        let bra = self.states.column(k);
        let ket = self.states.column(l);
        bra.adjoint().dot(&(op * ket))
    }

    /// V† O V: operator transformed into the eigenbasis.
    pub fn to_eigenbasis(&self, op: &DMatrix<C64>) -> DMatrix<C64> {
        self.states.adjoint() * op * &self.states
    }

    /// V O V†: operator given in the eigenbasis mapped back to the product basis.
    pub fn from_eigenbasis(&self, op: &DMatrix<C64>) -> DMatrix<C64> {
        &self.states * op * self.states.adjoint()
    }
}

/// Diagonalizes a Hermitian Hamiltonian.
///
/// Energies come out ascending. Within a degenerate cluster the states are
/// chosen as eigenvectors of the label operators and ordered by descending
/// electron ⟨Sz⟩, then descending nuclear ⟨Iz⟩ in factor order. Each
/// eigenvector's largest component is made real and positive.
pub fn diagonalize(h: &SpinOperator) -> Result<EigenSystem> {
    let err = h.hermiticity_error();
    if err > HERMITIAN_TOL {
        return Err(Error::NotHermitian(err));
    }
    let eig = HermitianEigen::new(&h.matrix);
    let n = eig.values.len();
    let mut energies = eig.values;
    let mut states = eig.vectors;

    let scale = h.matrix.norm().max(1e-300);
    let tie = tie_break_operator(&h.basis);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && energies[end] - energies[end - 1] <= DEGENERACY_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            resolve_cluster(&mut states, &mut energies, start, end, &tie);
        }
        start = end;
    }

    for k in 0..n {
        let mut col = states.column_mut(k);
        let (imax, _) =
            col.iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, z)| if z.norm_sqr() > acc.1 + 1e-12 { (i, z.norm_sqr()) } else { acc });
        let phase = col[imax].conj() / col[imax].norm();
        col.iter_mut().for_each(|z| *z *= phase);
    }

    let labels = (0..n)
        .map(|k| {
            let col = states.column(k);
            let (imax, _) = col.iter().enumerate().fold((0, -1.0), |acc, (i, z)| {
                if z.norm_sqr() > acc.1 + 1e-12 {
                    (i, z.norm_sqr())
                } else {
                    acc
                }
            });
            h.basis.label(imax)
        })
        .collect();

    Ok(EigenSystem { energies, states, basis: h.basis.clone(), labels })
}

fn tie_break_operator(basis: &Basis) -> DMatrix<C64> {
    let order: Vec<usize> = basis.electron_positions().into_iter().chain(basis.nucleus_positions()).collect();
    let mut acc = DMatrix::<C64>::zeros(basis.dimension(), basis.dimension());
    let mut w = 1.0;
    for (rank, pos) in order.into_iter().enumerate() {
        // electrons share weight 1 so total ⟨Sz⟩ leads the ordering
        if rank > 0 && basis.factors()[pos].kind == FactorKind::Nucleus {
            w *= TIE_BREAK_RATIO;
        }
        acc += basis.component(pos, Axis::Z).matrix.map(|z| z * w);
    }
    acc
}

fn resolve_cluster(states: &mut DMatrix<C64>, energies: &mut [f64], start: usize, end: usize, tie: &DMatrix<C64>) {
    let m = end - start;
    let sub = states.columns(start, m).into_owned();
    let projected = sub.adjoint() * tie * &sub;
    let eig = HermitianEigen::new(&projected);
    // descending label value
    let rotated = &sub * &eig.vectors;
    let mean = energies[start..end].iter().sum::<f64>() / m as f64;
    for j in 0..m {
        states.set_column(start + j, &rotated.column(m - 1 - j));
        energies[start + j] = mean;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_static_hamiltonian;
    use crate::linalg::unitarity_error;
    use crate::species::{FieldConfig, SpeciesParams};
    use crate::spin::SpinQuantumNumber;

    #[test]
    fn diagonal_input_sorted() {
        let basis = Basis::electron_nuclear(SpinQuantumNumber::HALF, &[SpinQuantumNumber::HALF]).unwrap();
        let d = [3.0, -1.0, 2.0, 0.5];
        let m = DMatrix::from_fn(4, 4, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) });
        let e = diagonalize(&SpinOperator::new(m, basis).unwrap()).unwrap();
        assert_eq!(e.energies, vec![-1.0, 0.5, 2.0, 3.0]);
        assert_eq!(e.labels[0], vec![0.5, -0.5]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let basis = Basis::single(SpinQuantumNumber::HALF, FactorKind::Electron);
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        );
        assert!(matches!(diagonalize(&SpinOperator::new(m, basis).unwrap()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_levels_resolved_by_labels() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let s = SpeciesParams { nuclear_g: 0.0, ..s.with_hyperfine(0.0) };
        let f = FieldConfig::new(344.8, 9.67).unwrap();
        let e = diagonalize(&build_static_hamiltonian(&s, &f).unwrap()).unwrap();
        // lowest cluster M_S = -3/2, ordered by descending M_I
        assert_eq!(e.labels[0], vec![-1.5, 1.0]);
        assert_eq!(e.labels[1], vec![-1.5, 0.0]);
        assert_eq!(e.labels[2], vec![-1.5, -1.0]);
        assert_eq!(e.labels[11], vec![1.5, -1.0]);
    }

    #[test]
    fn residual_and_unitarity() {
        let s = SpeciesParams::preset("14N@C60").unwrap();
        let f = FieldConfig::resonant(9.67, s.g).unwrap();
        let h = build_static_hamiltonian(&s, &f).unwrap();
        let e = diagonalize(&h).unwrap();
        let hn = h.matrix.norm();
        for k in 0..e.dim() {
            let v = e.states.column(k);
            let r = &h.matrix * v - v.map(|z| z * e.energies[k]);
            assert!(r.norm() < 1e-9 * hn);
        }
        assert!(unitarity_error(&e.states) < 1e-10);
    }
}
