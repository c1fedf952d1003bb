//! Dense complex linear algebra used throughout the crate.

mod eigen;
mod matrix;

pub use eigen::{
    cluster_eigenvalues, commutator_norm, hermitian_eig, EigenCluster, HermitianEigen, MAX_SWEEPS,
};
pub use matrix::{conj_vec, inner, vec_norm, ComplexMatrix, C64, I, ONE, ZERO};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds standing in for exact equalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative gap below which neighbouring eigenvalues are merged.
    pub eigen_cluster: f64,
    /// Absolute threshold for "zero" (kernel eigenvalues, Hermiticity).
    pub zero_threshold: f64,
    /// Commutator threshold relative to the operator norms involved.
    pub commutator_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eigen_cluster: 1e-8,
            zero_threshold: 1e-10,
            commutator_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(eigen_cluster: f64, zero_threshold: f64, commutator_tol: f64) -> Result<Self> {
        let t = Self {
            eigen_cluster,
            zero_threshold,
            commutator_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eigen_cluster", self.eigen_cluster),
            ("zero_threshold", self.zero_threshold),
            ("commutator_tol", self.commutator_tol),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidTolerance(name));
            }
        }
        Ok(())
    }

    pub fn with_commutator_tol(mut self, commutator_tol: f64) -> Result<Self> {
        self.commutator_tol = commutator_tol;
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_reject_negative() {
        assert!(Tolerances::new(1e-8, -1.0, 1e-9).is_err());
        assert!(Tolerances::new(f64::NAN, 1e-10, 1e-9).is_err());
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::default().with_commutator_tol(-1e-3).is_err());
    }
}
