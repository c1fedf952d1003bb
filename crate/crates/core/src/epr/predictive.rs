use super::criterion::commutation_threshold;
use super::schmidt::{schmidt_decompose, SchmidtDecomposition};
use crate::error::{Error, Result};
use crate::numerics::{cluster_eigenvalues, commutator_norm, hermitian_eig, ComplexMatrix, Tolerances};
use crate::tensor::{canonical_map, Observable, PureState};

/// The antilinear homomorphism B₂ ↦ B₁ = U·B₂·U† induced by a state σ on the
/// commutant ℬ^σ of L_σ†L_σ.
///
/// In coordinates B₁ = W·conj(B₂)·W† with W the d₁×d₂ matrix of U, which
/// vanishes on the kernel of L†L; B₁ is therefore zero on (ℋ₁^σ)⊥.
#[derive(Debug, Clone)]
pub struct PredictiveMap {
    decomposition: SchmidtDecomposition,
    gram: ComplexMatrix,
    imbedding: ComplexMatrix,
    tol: Tolerances,
    space1: crate::tensor::HilbertSpace,
}

impl PredictiveMap {
    pub fn new(state: &PureState, tol: &Tolerances) -> Result<Self> {
        let decomposition = schmidt_decompose(state, tol)?;
        let gram = canonical_map(state).gram_matrix();
        let imbedding = decomposition.imbedding_standard();
        Ok(Self {
            decomposition,
            gram,
            imbedding,
            tol: *tol,
            space1: state.space1().clone(),
        })
    }

    pub fn decomposition(&self) -> &SchmidtDecomposition {
        &self.decomposition
    }

    /// W, the d₁×d₂ matrix of U (zero on the kernel).
    pub fn imbedding_matrix(&self) -> &ComplexMatrix {
        &self.imbedding
    }

    /// Commutator norm of `op` with L†L and whether it is within tolerance.
    pub fn membership(&self, op: &ComplexMatrix) -> Result<(f64, bool)> {
        if op.shape() != self.gram.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.gram.rows(),
                found: op.rows(),
            });
        }
        let norm = commutator_norm(&self.gram, op)?;
        Ok((norm, norm <= commutation_threshold(&self.gram, op, &self.tol)))
    }

    /// W·conj(X)·W† for any operator X in ℬ^σ (not necessarily Hermitian).
    pub fn apply_operator(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (norm, ok) = self.membership(op)?;
        if !ok {
            return Err(Error::NotInAlgebra(norm));
        }
        Ok(self.transport(op))
    }

    /// W·conj(X)·W† without the membership check. Outside ℬ^σ this is no
    /// longer a homomorphism; it serves to probe states that fail the criterion.
    pub fn transport(&self, op: &ComplexMatrix) -> ComplexMatrix {
        &(&self.imbedding * &op.conj()) * &self.imbedding.dagger()
    }

    /// B₁ for an observable B₂ ∈ ℬ^σ.
    pub fn predict(&self, b2: &Observable) -> Result<Observable> {
        let b1 = self.apply_operator(b2.matrix())?.hermitian_part();
        let out = Observable::new(self.space1.clone(), b1, &self.tol)?;
        Ok(match b2.label() {
            Some(l) => out.with_label(format!("{l}_1")),
            None => out,
        })
    }

    /// Distinct eigenvalues of B₂ restricted to ℋ₂^σ (the set β^σ), ascending.
    pub fn support_spectrum(&self, b2: &Observable) -> Result<Vec<f64>> {
        let e = self.decomposition.support_basis();
        if b2.dim() != e.rows() {
            return Err(Error::DimensionMismatch {
                expected: e.rows(),
                found: b2.dim(),
            });
        }
        let restricted = (&(&e.dagger() * b2.matrix()) * &e).hermitian_part();
        let eig = hermitian_eig(&restricted, &self.tol)?;
        Ok(cluster_eigenvalues(&eig.values, &self.tol)
            .into_iter()
            .map(|c| c.value)
            .collect())
    }
}

/// B₁ = U·B₂·U† for B₂ ∈ ℬ^σ; fails with `NotInAlgebra` otherwise.
pub fn predictive_map(state: &PureState, b2: &Observable, tol: &Tolerances) -> Result<Observable> {
    PredictiveMap::new(state, tol)?.predict(b2)
}
