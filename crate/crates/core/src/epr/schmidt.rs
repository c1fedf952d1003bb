use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cluster_eigenvalues, hermitian_eig, ComplexMatrix, Tolerances, C64};
use crate::tensor::{canonical_map, HilbertSpace, PureState};

/// Isometry tolerance on ‖W†W − I‖_F.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Conjugate-linear isometry u ↦ W·conj(u) of `domain` into `codomain`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiunitaryImbedding {
    domain: HilbertSpace,
    codomain: HilbertSpace,
    matrix: ComplexMatrix,
}

impl AntiunitaryImbedding {
    pub fn new(domain: HilbertSpace, codomain: HilbertSpace, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "imbedding matrix {}x{} for dimension {} into {}",
                matrix.rows(),
                matrix.cols(),
                domain.dim(),
                codomain.dim()
            )));
        }
        let residual = isometry_residual(&matrix);
        if residual.is_nan() || residual > ISOMETRY_TOL {
            return Err(Error::NotIsometry(residual));
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let domain = HilbertSpace::new(matrix.cols())?;
        let codomain = HilbertSpace::new(matrix.rows())?;
        Self::new(domain, codomain, matrix)
    }

    /// Complex conjugation of coordinates, ℂᵈ → ℂᵈ.
    pub fn conjugation(dim: usize) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::identity(dim))
    }

    pub fn domain(&self) -> &HilbertSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &HilbertSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, u: &[C64]) -> Result<Vec<C64>> {
        self.matrix.mul_vec(&crate::numerics::conj_vec(u))
    }

    pub fn isometry_residual(&self) -> f64 {
        isometry_residual(&self.matrix)
    }
}

pub(crate) fn isometry_residual(w: &ComplexMatrix) -> f64 {
    (&w.dagger() * w).distance(&ComplexMatrix::identity(w.cols()))
}

/// Spectral data of L_σ†L_σ split into its positive eigenspaces and kernel,
/// together with the antiunitary imbedding U of the support into ℋ₁.
///
/// The imbedding's domain is ℋ₂^σ in the basis formed by concatenating the
/// columns of `h2_blocks`, so its k-th column is U applied to that k-th vector.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    lambdas: Vec<f64>,
    mults: Vec<usize>,
    h2_blocks: Vec<ComplexMatrix>,
    kernel_basis: ComplexMatrix,
    imbedding: AntiunitaryImbedding,
    norm_sqr: f64,
}

impl SchmidtDecomposition {
    /// Distinct positive eigenvalues of L†L, descending.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// Orthonormal bases (as columns) of the eigenspaces ℋ₂(λ_j).
    pub fn h2_blocks(&self) -> &[ComplexMatrix] {
        &self.h2_blocks
    }

    /// Orthonormal basis (as columns) of ker L†L.
    pub fn kernel_basis(&self) -> &ComplexMatrix {
        &self.kernel_basis
    }

    pub fn imbedding(&self) -> &AntiunitaryImbedding {
        &self.imbedding
    }

    pub fn norm_sqr(&self) -> f64 {
        self.norm_sqr
    }

    /// dim ℋ₂^σ, the Schmidt rank.
    pub fn rank(&self) -> usize {
        self.mults.iter().sum()
    }

    /// Σ_j d_j·λ_j.
    pub fn weight_sum(&self) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.mults)
            .map(|(l, &d)| l * d as f64)
            .sum()
    }

    /// Single eigenvalue filling all of ℋ₂.
    pub fn is_maximal(&self) -> bool {
        self.lambdas.len() == 1 && self.kernel_basis.cols() == 0
    }

    /// Orthonormal basis of ℋ₂^σ: the blocks side by side.
    pub fn support_basis(&self) -> ComplexMatrix {
        let refs: Vec<&ComplexMatrix> = self.h2_blocks.iter().collect();
        if refs.is_empty() {
            return ComplexMatrix::zeros(self.kernel_basis.rows(), 0);
        }
        ComplexMatrix::hstack(&refs).expect("blocks share the row count")
    }

    /// U in standard coordinates of ℋ₂, extended by zero on the kernel:
    /// a d₁×d₂ partial isometry with U u = W·conj(u).
    pub fn imbedding_standard(&self) -> ComplexMatrix {
        &self.imbedding.matrix * &self.support_basis().transpose()
    }

    /// Orthonormal bases of the image blocks ℋ₁(λ_j) = L_σ[ℋ₂(λ_j)].
    pub fn h1_blocks(&self) -> Vec<ComplexMatrix> {
        let mut start = 0;
        self.mults
            .iter()
            .map(|&d| {
                let b = self.imbedding.matrix.columns(start..start + d);
                start += d;
                b
            })
            .collect()
    }

    /// Orthogonal projection onto ℋ₂^σ.
    pub fn support_projector_h2(&self) -> ComplexMatrix {
        let e = self.support_basis();
        &e * &e.dagger()
    }

    /// Orthogonal projection onto ℋ₁^σ.
    pub fn support_projector_h1(&self) -> ComplexMatrix {
        let w = &self.imbedding.matrix;
        w * &w.dagger()
    }
}

/// Eigenspace decomposition of L_σ†L_σ and the imbedding U = λ_j^{-1/2}·L_σ on ℋ₂(λ_j).
///
/// Eigenvalues at or below `zero_threshold·Tr(L†L)` are assigned to the kernel.
pub fn schmidt_decompose(state: &PureState, tol: &Tolerances) -> Result<SchmidtDecomposition> {
    let norm = state.norm();
    if norm <= tol.zero_threshold {
        return Err(Error::ZeroState(norm));
    }
    let map = canonical_map(state);
    let gram = map.gram_matrix().hermitian_part();
    let trace = gram.trace().re;
    let eig = hermitian_eig(&gram, tol)?;
    let d2 = gram.rows();

    let cutoff = tol.zero_threshold * trace;
    let kernel_len = eig.values.iter().take_while(|&&v| v <= cutoff).count();
    let kernel_basis = eig.vectors.columns(0..kernel_len);

    // positive part, descending
    let positive: Vec<f64> = eig.values[kernel_len..].iter().rev().copied().collect();
    let positive_vectors =
        ComplexMatrix::from_fn(d2, d2 - kernel_len, |i, k| eig.vectors[(i, d2 - 1 - k)]);

    // cluster_eigenvalues expects ascending input
    let ascending: Vec<f64> = positive.iter().rev().copied().collect();
    let mut clusters = cluster_eigenvalues(&ascending, tol);
    clusters.reverse();

    let mut lambdas = Vec::with_capacity(clusters.len());
    let mut mults = Vec::with_capacity(clusters.len());
    let mut h2_blocks = Vec::with_capacity(clusters.len());
    let mut start = 0;
    for c in &clusters {
        let d = c.multiplicity();
        lambdas.push(c.value);
        mults.push(d);
        h2_blocks.push(positive_vectors.columns(start..start + d));
        start += d;
    }

    // U e_k = λ_k^{-1/2}·A·conj(e_k), re-orthonormalized against rounding
    let a = map.matrix();
    let images = &(a * &positive_vectors.conj())
        * &ComplexMatrix::diag_real(&positive.iter().map(|l| 1.0 / l.sqrt()).collect::<Vec<_>>());
    let w = images.orthonormalize_columns();
    if w.cols() == 0 {
        return Err(Error::ZeroState(norm));
    }
    let domain = HilbertSpace::new(w.cols())?;
    let imbedding = AntiunitaryImbedding::new(domain, state.space1().clone(), w)?;

    Ok(SchmidtDecomposition {
        lambdas,
        mults,
        h2_blocks,
        kernel_basis,
        imbedding,
        norm_sqr: trace,
    })
}

/// λ/multiplicity table in a serializable form.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    pub lambdas: Vec<f64>,
    pub mults: Vec<usize>,
    pub kernel_dim: usize,
    pub weight_sum: f64,
    pub is_maximal: bool,
}

impl From<&SchmidtDecomposition> for SpectrumTable {
    fn from(d: &SchmidtDecomposition) -> Self {
        Self {
            lambdas: d.lambdas.clone(),
            mults: d.mults.clone(),
            kernel_dim: d.kernel_basis.cols(),
            weight_sum: d.weight_sum(),
            is_maximal: d.is_maximal(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    pub(crate) fn bohm() -> PureState {
        let h = FRAC_1_SQRT_2;
        PureState::new(ComplexMatrix::from_real_rows(&[vec![0.0, h], vec![-h, 0.0]]).unwrap())
            .unwrap()
    }

    #[test]
    fn bohm_single_block() {
        let d = schmidt_decompose(&bohm(), &tol()).unwrap();
        assert_eq!(d.mults(), &[2]);
        assert!((d.lambdas()[0] - 0.5).abs() < 1e-15);
        assert_eq!(d.kernel_basis().cols(), 0);
        assert!(d.is_maximal());
        // basis independent: W_std = √2·A
        let w = d.imbedding_standard();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(w.distance(&expected) < 1e-14);
    }

    #[test]
    fn diagonal_weights() {
        let s = PureState::new(ComplexMatrix::diag_real(&[0.9f64.sqrt(), 0.1f64.sqrt()])).unwrap();
        let d = schmidt_decompose(&s, &tol()).unwrap();
        assert_eq!(d.mults(), &[1, 1]);
        assert!((d.lambdas()[0] - 0.9).abs() < 1e-14);
        assert!((d.lambdas()[1] - 0.1).abs() < 1e-14);
        assert!((d.weight_sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_entangled_four() {
        let s = PureState::new(ComplexMatrix::identity(4).scale_real(0.5)).unwrap();
        let d = schmidt_decompose(&s, &tol()).unwrap();
        assert_eq!(d.mults(), &[4]);
        assert!((d.lambdas()[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_state_has_kernel() {
        let s = PureState::product(&[ONE, ZERO, ZERO], &[ZERO, ONE]).unwrap();
        let d = schmidt_decompose(&s, &tol()).unwrap();
        assert_eq!(d.mults(), &[1]);
        assert_eq!(d.kernel_basis().cols(), 1);
        assert!(!d.is_maximal());
        let p = d.support_projector_h1();
        assert!((p[(0, 0)] - ONE).norm() < 1e-14);
        assert!(p.trace().re - 1.0 < 1e-14);
    }

    #[test]
    fn zero_state_rejected() {
        let s = PureState::new(ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            schmidt_decompose(&s, &tol()),
            Err(Error::ZeroState(_))
        ));
    }

    #[test]
    fn imbedding_validates_isometry() {
        assert!(AntiunitaryImbedding::conjugation(3).is_ok());
        let not_iso = ComplexMatrix::diag_real(&[1.0, 0.5]);
        assert!(matches!(
            AntiunitaryImbedding::from_matrix(not_iso),
            Err(Error::NotIsometry(_))
        ));
        // 3x2 isometry into a larger space is fine
        let w = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        assert!(AntiunitaryImbedding::from_matrix(w).is_ok());
    }
}
