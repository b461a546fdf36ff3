// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::quadrature::{gauss_hermite, gauss_legendre};

/// Default number of quadrature nodes for B1 distributions.
pub const DEFAULT_NODES: usize = 21;

/// Distribution of the B1 scale factor across the sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InhomogeneityModel {
    /// Every spin sees the nominal field.
    Delta,
    /// Normal distribution with mean 1, sampled at Gauss–Hermite nodes.
    Gaussian { sigma: f64, nodes: usize },
    /// Flat distribution on [lo, hi], sampled at Gauss–Legendre nodes.
    Uniform { lo: f64, hi: f64, nodes: usize },
}

impl Default for InhomogeneityModel {
    fn default() -> Self {
        InhomogeneityModel::Gaussian { sigma: 0.0, nodes: DEFAULT_NODES }
    }
}

impl InhomogeneityModel {
    pub fn gaussian(sigma: f64) -> Self {
        InhomogeneityModel::Gaussian { sigma, nodes: DEFAULT_NODES }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InhomogeneityModel::Delta => Ok(()),
            InhomogeneityModel::Gaussian { sigma, nodes } => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::param("sigma", format!("must be >= 0, got {sigma}")));
                }
                if nodes == 0 {
                    return Err(Error::param("nodes", "at least one sample is required"));
                }
                Ok(())
            }
            InhomogeneityModel::Uniform { lo, hi, nodes } => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::param("range", format!("need lo <= hi, got [{lo}, {hi}]")));
                }
                if nodes == 0 {
                    return Err(Error::param("nodes", "at least one sample is required"));
                }
                Ok(())
            }
        }
    }

    /// (scale factor, weight) pairs; weights sum to one.
    pub fn samples(&self) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        Ok(match *self {
            InhomogeneityModel::Delta => vec![(1.0, 1.0)],
            InhomogeneityModel::Gaussian { sigma: 0.0, .. } => vec![(1.0, 1.0)],
            InhomogeneityModel::Gaussian { sigma, nodes } => {
                let r = gauss_hermite(nodes);
                r.nodes.iter().zip(&r.weights).map(|(x, w)| (1.0 + sigma * x, *w)).collect()
            }
            InhomogeneityModel::Uniform { lo, hi, nodes } => {
                let r = gauss_legendre(nodes);
                let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                r.nodes.iter().zip(&r.weights).map(|(x, w)| (mid + half * x, *w)).collect()
            }
        })
    }
}
