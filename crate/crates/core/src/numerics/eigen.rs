//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair (p, q) of the working
//! matrix. The complex pair is first phase-rotated to a real symmetric
//! 2x2 problem and then handled by the usual real Jacobi formulas, so a
//! single rotation has the form
//!
//! ```text
//!     J = [  c          s·e^{iφ} ]      a_pq = |a_pq|·e^{iφ}
//!         [ -s·e^{-iφ}  c        ]
//! ```
//!
//! and the update is H ← J†HJ, V ← VJ.

use std::ops::Range;

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::Tolerances;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (column k belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// U·diag(λ)·U†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.vectors;
        let scaled = ComplexMatrix::from_fn(u.rows(), u.cols(), |i, j| u[(i, j)] * self.values[j]);
        &scaled * &u.dagger()
    }
}

/// A run of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    /// Mean of the clustered eigenvalues.
    pub value: f64,
    /// Positions in the ascending eigenvalue list.
    pub range: Range<usize>,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.range.len()
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NonSquare(m.rows(), m.cols()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = m.frobenius_norm();
    let residual = m.hermiticity_residual();
    if residual > tol.zero_threshold * (1.0 + norm) {
        return Err(Error::NotHermitian(residual));
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let target = f64::EPSILON * norm;
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            operation: "hermitian_eig",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip rotations that cannot change the diagonal in floating point.
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = C64::new(c, 0.0);
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;
    let j_qq = C64::new(c, 0.0);

    let n = a.rows();
    // A ← A J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Groups an ascending eigenvalue list into clusters of numerically equal values.
///
/// Neighbours closer than `eigen_cluster·(1 + |value|)` share a cluster.
pub fn cluster_eigenvalues(values: &[f64], tol: &Tolerances) -> Vec<EigenCluster> {
    let mut clusters = Vec::new();
    if values.is_empty() {
        return clusters;
    }
    let mut start = 0;
    for k in 1..=values.len() {
        let split = k == values.len() || {
            let scale = 1.0 + values[k].abs().max(values[k - 1].abs());
            values[k] - values[k - 1] > tol.eigen_cluster * scale
        };
        if split {
            let slice = &values[start..k];
            let value = slice.iter().sum::<f64>() / slice.len() as f64;
            clusters.push(EigenCluster {
                value,
                range: start..k,
            });
            start = k;
        }
    }
    clusters
}

/// ‖AB − BA‖_F.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.commutator(b)?.frobenius_norm())
}
