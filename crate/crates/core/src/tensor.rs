//! Bipartite pure states and their conjugate-linear Hilbert–Schmidt maps.
//!
//! A state σ ∈ ℋ₁⊗ℋ₂ is stored as its coefficient matrix C over product bases
//! (row index on ℋ₁, column index on ℋ₂), so that σ = Σ_n v_n ⊗ e_n with v_n
//! the n-th column. The associated conjugate-linear map L_σ : ℋ₂ → ℋ₁ is
//! determined by L_σ e_n = v_n and acts in coordinates as u ↦ C·conj(u).
//! With that convention:
//!
//! * the adjoint L† (defined by (Lu, v) = (L†v, u)) has matrix Cᵀ,
//! * the linear operator L†L on ℋ₂ has matrix Cᵀ·conj(C).
//!
//! Unlike the linear map e_n ↦ v_n, the conjugate-linear one does not depend
//! on the basis used to expand σ.

use crate::error::{Error, Result};
use crate::numerics::{
    cluster_eigenvalues, conj_vec, hermitian_eig, ComplexMatrix, EigenCluster, HermitianEigen,
    Tolerances, C64,
};

/// Normalization tolerance for states that promise unit norm.
pub const NORM_TOL: f64 = 1e-10;

/// A finite-dimensional Hilbert space with labelled basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    dim: usize,
    labels: Vec<String>,
}

impl HilbertSpace {
    /// Space of dimension `dim` with labels `"0"`, `"1"`, ...
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_labels((0..dim).map(|k| k.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpace("basis labels must be distinct".into()));
        }
        Ok(Self {
            dim: labels.len(),
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A vector in ℋ₁⊗ℋ₂, not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space1: HilbertSpace,
    space2: HilbertSpace,
    coeffs: ComplexMatrix,
}

impl PureState {
    /// State with coefficient matrix `coeffs` (entry (i, j) multiplies f_i ⊗ e_j).
    pub fn new(coeffs: ComplexMatrix) -> Result<Self> {
        let space1 = HilbertSpace::new(coeffs.rows())?;
        let space2 = HilbertSpace::new(coeffs.cols())?;
        Self::with_spaces(space1, space2, coeffs)
    }

    pub fn with_spaces(
        space1: HilbertSpace,
        space2: HilbertSpace,
        coeffs: ComplexMatrix,
    ) -> Result<Self> {
        if coeffs.shape() != (space1.dim(), space2.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "coefficients {}x{} for spaces of dimension {} and {}",
                coeffs.rows(),
                coeffs.cols(),
                space1.dim(),
                space2.dim()
            )));
        }
        if !coeffs.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            space1,
            space2,
            coeffs,
        })
    }

    /// Like [`PureState::new`] but insists on unit norm.
    pub fn normalized_from(coeffs: ComplexMatrix) -> Result<Self> {
        let s = Self::new(coeffs)?;
        s.ensure_normalized()?;
        Ok(s)
    }

    /// Product state u ⊗ v.
    pub fn product(u: &[C64], v: &[C64]) -> Result<Self> {
        let m = ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j]);
        Self::new(m)
    }

    pub fn space1(&self) -> &HilbertSpace {
        &self.space1
    }

    pub fn space2(&self) -> &HilbertSpace {
        &self.space2
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    pub fn dims(&self) -> (usize, usize) {
        self.coeffs.shape()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.frobenius_norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm()))
        }
    }

    /// σ/‖σ‖.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroState(n));
        }
        Ok(Self {
            coeffs: self.coeffs.scale_real(1.0 / n),
            ..self.clone()
        })
    }

    /// Coordinates in ℋ₁⊗ℋ₂ ordered as (i, j) ↦ i·d₂ + j.
    pub fn to_vector(&self) -> Vec<C64> {
        self.coeffs.as_slice().to_vec()
    }
}

/// Conjugate-linear map ℋ₂ → ℋ₁ acting in coordinates as u ↦ A·conj(u).
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateLinearMap {
    domain: HilbertSpace,
    codomain: HilbertSpace,
    matrix: ComplexMatrix,
}

impl ConjugateLinearMap {
    pub fn new(domain: HilbertSpace, codomain: HilbertSpace, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a map from dimension {} to {}",
                matrix.rows(),
                matrix.cols(),
                domain.dim(),
                codomain.dim()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
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

    pub fn domain(&self) -> &HilbertSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &HilbertSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// L u = A·conj(u).
    pub fn apply(&self, u: &[C64]) -> Result<Vec<C64>> {
        if u.len() != self.domain.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a map on dimension {}",
                u.len(),
                self.domain.dim()
            )));
        }
        self.matrix.mul_vec(&conj_vec(u))
    }

    /// The adjoint L† : ℋ₁ → ℋ₂, again conjugate-linear, with matrix Aᵀ.
    pub fn adjoint(&self) -> Self {
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    /// Matrix of the linear operator L†L on the domain: Aᵀ·conj(A).
    pub fn gram_matrix(&self) -> ComplexMatrix {
        &self.matrix.transpose() * &self.matrix.conj()
    }

    pub fn gram(&self, tol: &Tolerances) -> Result<Observable> {
        Observable::new(self.domain.clone(), self.gram_matrix().hermitian_part(), tol)
    }

    /// Tr(L†L) = ‖A‖_F².
    pub fn hilbert_schmidt_norm_sqr(&self) -> f64 {
        self.matrix.norm_sqr()
    }

    /// Re-assembles Σ_m L f_m ⊗ f_m for the orthonormal basis given by the
    /// columns of `basis`.
    pub fn reassemble(&self, basis: &ComplexMatrix) -> Result<PureState> {
        let d2 = self.domain.dim();
        if basis.shape() != (d2, d2) {
            return Err(Error::ShapeMismatch(format!(
                "basis must be {d2}x{d2}, got {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        let mut coeffs = ComplexMatrix::zeros(self.codomain.dim(), d2);
        for m in 0..d2 {
            let f = basis.column(m);
            let image = self.apply(&f)?;
            for (i, &a) in image.iter().enumerate() {
                for (j, &b) in f.iter().enumerate() {
                    coeffs[(i, j)] += a * b;
                }
            }
        }
        PureState::with_spaces(self.codomain.clone(), self.domain.clone(), coeffs)
    }
}

/// σ ↦ L_σ. Stored data is shared: the map's matrix is σ's coefficient matrix.
pub fn canonical_map(state: &PureState) -> ConjugateLinearMap {
    ConjugateLinearMap {
        domain: state.space2.clone(),
        codomain: state.space1.clone(),
        matrix: state.coeffs.clone(),
    }
}

/// L ↦ σ with σ = Σ_n L e_n ⊗ e_n.
pub fn inverse_canonical(map: &ConjugateLinearMap) -> PureState {
    PureState {
        space1: map.codomain.clone(),
        space2: map.domain.clone(),
        coeffs: map.matrix.clone(),
    }
}

pub fn adjoint(map: &ConjugateLinearMap) -> ConjugateLinearMap {
    map.adjoint()
}

pub fn gram(map: &ConjugateLinearMap, tol: &Tolerances) -> Result<Observable> {
    map.gram(tol)
}

/// (‖σ‖², Tr(L_σ†L_σ)); the two agree for every σ.
pub fn state_norm_identity(state: &PureState) -> (f64, f64) {
    let lhs = state.coeffs.norm_sqr();
    let rhs = canonical_map(state).gram_matrix().trace().re;
    (lhs, rhs)
}

pub fn apply_conjugate_linear(map: &ConjugateLinearMap, u: &[C64]) -> Result<Vec<C64>> {
    map.apply(u)
}

/// A Hermitian operator together with its clustered spectral resolution.
#[derive(Debug, Clone)]
pub struct Observable {
    space: HilbertSpace,
    matrix: ComplexMatrix,
    eigen: HermitianEigen,
    clusters: Vec<EigenCluster>,
    label: Option<String>,
}

impl Observable {
    pub fn new(space: HilbertSpace, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare(matrix.rows(), matrix.cols()));
        }
        if matrix.rows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: matrix.rows(),
            });
        }
        let eigen = hermitian_eig(&matrix, tol)?;
        let clusters = cluster_eigenvalues(&eigen.values, tol);
        Ok(Self {
            space,
            matrix,
            eigen,
            clusters,
            label: None,
        })
    }

    pub fn from_matrix(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let space = HilbertSpace::new(matrix.rows().max(1))?;
        Self::new(space, matrix, tol)
    }

    /// Diagonal observable diag(values) in the standard basis.
    pub fn diagonal(values: &[f64], tol: &Tolerances) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::diag_real(values), tol)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    /// Distinct eigenvalues (cluster representatives), ascending.
    pub fn spectral_values(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    /// Orthonormal basis (as columns) of the k-th eigenspace.
    pub fn eigenspace(&self, k: usize) -> ComplexMatrix {
        self.eigen.vectors.columns(self.clusters[k].range.clone())
    }

    /// Orthogonal projection onto the k-th eigenspace.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        let v = self.eigenspace(k);
        &v * &v.dagger()
    }
}
