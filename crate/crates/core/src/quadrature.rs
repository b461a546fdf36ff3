// SPDX-License-Identifier: Apache-2.0

//! Gauss quadrature rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a quadrature rule; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn golub_welsch(n: usize, diag: impl Fn(usize) -> f64, offdiag: impl Fn(usize) -> f64) -> Rule {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag(i)
        } else if i + 1 == j {
            offdiag(j)
        } else if j + 1 == i {
            offdiag(i)
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1 / total).collect() }
}

/// Gauss–Hermite rule for the standard normal density (probabilists' form).
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n >= 1);
    // monic probabilists' Hermite recurrence: beta_k = k
    golub_welsch(n, |_| 0.0, |k| (k as f64).sqrt())
}

/// Gauss–Legendre rule on [-1, 1] with weights normalised to one.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    golub_welsch(
        n,
        |_| 0.0,
        |k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        },
    )
}
