// SPDX-License-Identifier: Apache-2.0

//! Dense Hermitian helpers on top of nalgebra.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column eigenvectors, same order as `values`.
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn new(matrix: &DMatrix<C64>) -> Self {
        // symmetrize first so rounding-level anti-Hermitian noise cannot leak in
        let sym = (matrix + matrix.adjoint()).map(|z| z * 0.5);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(matrix.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
        HermitianEigen { values, vectors }
    }

    /// V f(Λ) V† for a complex scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let d = DVector::from_iterator(self.values.len(), self.values.iter().map(|&v| f(v)));
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| self.vectors[(i, j)] * d[j]);
        scaled * self.vectors.adjoint()
    }

    /// Propagator exp(−2πi·H·t) with H in MHz and t in µs.
    pub fn propagator(&self, t_us: f64) -> DMatrix<C64> {
        self.apply(|e| C64::from_polar(1.0, -TAU * e * t_us))
    }
}

/// U ρ U†.
pub fn conjugate(u: &DMatrix<C64>, rho: &DMatrix<C64>) -> DMatrix<C64> {
    u * rho * u.adjoint()
}

/// Real part of Tr(A·B) without forming the product.
pub fn trace_product_re(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Frobenius distance of U†U from the identity.
pub fn unitarity_error(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<C64>::identity(n, n)).norm()
}

/// Largest singular value (operator 2-norm).
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    let mh = m.adjoint() * m;
    let eig = HermitianEigen::new(&mh);
    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}
